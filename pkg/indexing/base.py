import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from errors import ArgumentError, DuplicateIdError, StructureError
from spectral import ClusterNode, ClusterTree
from tokenization import Token, TokenRegistry, render

logger = logging.getLogger(__name__)

TokenIds = Tuple[Token, ...]


class Scheme(str, Enum):
    RID = "rid"
    TID = "tid"
    IID = "iid"
    SID = "sid"
    CID = "cid"
    SEMID = "semid"
    HID = "hid"

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ArgumentError(f"Unknown scheme {value!r}; choose from {', '.join(s.value for s in cls)}")


@dataclass
class IndexAssignment:
    """Item -> token sequence for one scheme, in item ingest order."""

    scheme: Optional[Scheme]
    ids: Dict[str, TokenIds]
    registry: TokenRegistry
    params: Dict[str, object] = field(default_factory=dict)
    cold_items: List[str] = field(default_factory=list)
    tree: Optional[ClusterTree] = None

    def __post_init__(self):
        empty = [item for item, tokens in self.ids.items() if not tokens]
        if empty:
            raise StructureError(f"{len(empty)} item(s) have an empty ID, first {empty[0]!r}")

    @property
    def items(self) -> List[str]:
        return list(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, item: str) -> bool:
        return item in self.ids

    def rendered(self, item: str) -> str:
        return render(self.ids[item])

    def collisions(self) -> List[Tuple[str, str]]:
        owner: Dict[TokenIds, str] = {}
        found = []
        for item, tokens in self.ids.items():
            if tokens in owner:
                found.append((owner[tokens], item))
            else:
                owner[tokens] = item
        return found

    def ensure_unique(self) -> "IndexAssignment":
        collisions = self.collisions()
        if collisions:
            raise DuplicateIdError(collisions)
        return self

    def extra_labels(self) -> List[str]:
        """Extra tokens used by the IDs, in order of first use."""
        labels: Dict[str, None] = {}
        for tokens in self.ids.values():
            for token in tokens:
                if token.is_extra:
                    labels.setdefault(token.text, None)
        return list(labels)


def assign_tokens_to_tree(tree: ClusterTree, k: int, registry: TokenRegistry) -> ClusterTree:
    """Label nodes breadth-first with <0>..<k-1>, cycling, then items per final cluster."""
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")

    for node in [tree.root, *tree.nodes()]:
        if len(node.children) > k:
            raise StructureError(f"Node with {len(node.children)} children exceeds k={k}")
        if len(node.items) > k:
            raise StructureError(f"Final cluster with {len(node.items)} items exceeds k={k}")

    counter = 0
    for node in tree.nodes():
        node.token = registry.register_extra(str(counter % k))
        counter += 1

    for cluster in tree.final_clusters():
        cluster.item_tokens = {
            item: registry.register_extra(str(position)) for position, item in enumerate(cluster.items)
        }
    return tree


def holder_of(path: List[ClusterNode], tree: ClusterTree) -> ClusterNode:
    return path[-1] if path else tree.root


def tree_ids(tree: ClusterTree) -> Dict[str, TokenIds]:
    """Ancestor tokens (root excluded) followed by the item's leaf token."""
    ids = {}
    for item, path in tree.item_paths().items():
        leaf = holder_of(path, tree).item_tokens[item]
        ids[item] = tuple(node.token for node in path) + (leaf,)
    return ids
