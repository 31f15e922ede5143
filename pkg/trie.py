import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import config
from errors import DuplicateIdError
from indexing import IndexAssignment
from tokenization import Token

logger = logging.getLogger(__name__)


class EndOfId(Enum):
    MARKER = "end-of-id"

    def __str__(self) -> str:
        return config.Messages.END_OF_ID_TEXT


END_OF_ID = EndOfId.MARKER

NextToken = Union[Token, EndOfId]


@dataclass
class TrieNode:
    children: Dict[Token, "TrieNode"] = field(default_factory=dict)
    item: Optional[str] = None


@dataclass
class VerificationReport:
    unique: bool
    prefix_free: bool
    collisions: List[Tuple[str, str]] = field(default_factory=list)
    prefix_pairs: List[Tuple[str, str]] = field(default_factory=list)
    items: int = 0

    def to_dict(self) -> dict:
        return {
            "items": self.items,
            "unique": self.unique,
            "prefix_free": self.prefix_free,
            "collisions": [list(pair) for pair in self.collisions],
            "prefix_pairs": [list(pair) for pair in self.prefix_pairs],
        }


class PrefixTrie:
    """All valid IDs of an assignment, keyed token by token."""

    def __init__(self):
        self.root = TrieNode()
        self.node_count = 1
        self.terminals = 0

    def insert(self, tokens: Sequence[Token], item: str) -> None:
        node = self.root
        for token in tokens:
            if token not in node.children:
                node.children[token] = TrieNode()
                self.node_count += 1
            node = node.children[token]
        if node.item is not None:
            raise DuplicateIdError([(node.item, item)])
        node.item = item
        self.terminals += 1

    def find(self, prefix: Sequence[Token]) -> Optional[TrieNode]:
        node = self.root
        for token in prefix:
            node = node.children.get(token)
            if node is None:
                return None
        return node

    def __len__(self) -> int:
        return self.terminals


def build_trie(assignment: IndexAssignment) -> PrefixTrie:
    trie = PrefixTrie()
    for item, tokens in assignment.ids.items():
        trie.insert(tokens, item)
    logger.debug(f"Trie over {len(trie)} IDs has {trie.node_count} nodes")
    return trie


def allowed_next(trie: PrefixTrie, prefix: Sequence[Token]) -> Set[NextToken]:
    node = trie.find(prefix)
    if node is None:
        return set()
    allowed: Set[NextToken] = set(node.children)
    if node.item is not None:
        allowed.add(END_OF_ID)
    return allowed


def lookup(trie: PrefixTrie, tokens: Sequence[Token]) -> Optional[str]:
    node = trie.find(tokens)
    return node.item if node is not None else None


def _prefix_pairs_exhaustive(assignment: IndexAssignment) -> List[Tuple[str, str]]:
    # every proper prefix of every ID, then one hash probe per ID
    owners: Dict[Tuple[Token, ...], List[str]] = {}
    for item, tokens in assignment.ids.items():
        for cut in range(1, len(tokens)):
            owners.setdefault(tokens[:cut], []).append(item)
    pairs = []
    for item, tokens in assignment.ids.items():
        for longer in owners.get(tokens, []):
            pairs.append((item, longer))
    return pairs


def _prefix_pairs_walk(trie: PrefixTrie) -> List[Tuple[str, str]]:
    pairs = []
    stack = [trie.root]
    while stack:
        node = stack.pop()
        if node.item is not None and node.children:
            below = list(node.children.values())
            while below:
                child = below.pop()
                if child.item is not None:
                    pairs.append((node.item, child.item))
                below.extend(child.children.values())
        stack.extend(node.children.values())
    return pairs


def verify_assignment(trie: Optional[PrefixTrie], assignment: IndexAssignment) -> VerificationReport:
    """Uniqueness and prefix-freeness of an assignment.

    A trie built from a non-unique assignment cannot exist, so collisions are
    always found by hashing; prefix pairs come from exhaustive enumeration up to
    VERIFY_BRUTE_FORCE_LIMIT items and from a trie walk above it.
    """
    collisions = assignment.collisions()
    if len(assignment) <= config.VERIFY_BRUTE_FORCE_LIMIT:
        prefix_pairs = _prefix_pairs_exhaustive(assignment)
    else:
        if trie is None:
            first_ids = {}
            for item, tokens in assignment.ids.items():
                first_ids.setdefault(tokens, item)
            trie = PrefixTrie()
            for tokens, item in first_ids.items():
                trie.insert(tokens, item)
        prefix_pairs = _prefix_pairs_walk(trie)

    report = VerificationReport(
        unique=not collisions,
        prefix_free=not collisions and not prefix_pairs,
        collisions=collisions,
        prefix_pairs=prefix_pairs,
        items=len(assignment),
    )
    if collisions:
        logger.warning(f"{len(collisions)} duplicate ID(s) among {len(assignment)} items")
    return report
