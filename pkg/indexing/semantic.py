import logging
from collections import Counter, defaultdict
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import config
from corpus import ItemMeta
from errors import ArgumentError
from helper_func import category_label
from indexing.base import IndexAssignment, Scheme, TokenIds, holder_of
from spectral import ClusterNode, ClusterTree
from tokenization import TokenRegistry

logger = logging.getLogger(__name__)

CategoryPath = Tuple[str, ...]
# category hierarchies reuse the cluster tree shape; node.name holds the category
CategoryTree = ClusterTree

# metadata loading drops blank names, so no real path equals this one
UNKNOWN_PATH: CategoryPath = ("",)


def choose_path(meta: Optional[ItemMeta]) -> CategoryPath:
    """Longest category path, ties broken lexicographically; uncategorised -> UNKNOWN_PATH."""
    if meta is None or not meta.category_paths:
        return UNKNOWN_PATH
    return min(meta.category_paths, key=lambda path: (-len(path), path))


def _strip_common_root(paths: Dict[str, CategoryPath]) -> Dict[str, CategoryPath]:
    categorised = [path for path in paths.values() if path != UNKNOWN_PATH]
    roots = {path[0] for path in categorised}
    if len(roots) != 1 or not any(len(path) > 1 for path in categorised):
        return paths
    root = roots.pop()
    logger.debug(f"Treating {root!r} as the category root")
    return {item: path[1:] if path != UNKNOWN_PATH else path for item, path in paths.items()}


def build_category_tree(items: Sequence[str], metadata: Mapping[str, ItemMeta]) -> Tuple[CategoryTree, Dict[str, CategoryPath]]:
    items = list(items)
    paths = _strip_common_root({item: choose_path(metadata.get(item)) for item in items})

    root = ClusterNode()
    nodes: Dict[CategoryPath, ClusterNode] = {(): root}
    for item in items:
        path = paths[item]
        for depth in range(1, len(path) + 1):
            prefix = path[:depth]
            if prefix not in nodes:
                name = config.UNKNOWN_CATEGORY if prefix == UNKNOWN_PATH else prefix[-1]
                node = ClusterNode(name=name)
                nodes[prefix[:-1]].children.append(node)
                nodes[prefix] = node
        nodes[path].items.append(item)

    tree = CategoryTree(root=root, item_order={item: i for i, item in enumerate(items)})
    tree.sort_children()
    return tree, paths


def node_label(path: CategoryPath) -> str:
    if path == UNKNOWN_PATH:
        return config.UNKNOWN_CATEGORY
    return category_label(path[-1])


def _tree_labels(paths: List[CategoryPath]) -> Dict[CategoryPath, str]:
    """Category path -> token label, one label per path.

    Paths sharing a label (a name under several parents, or names that
    normalise alike) are numbered in discovery order: Eyes1, Eyes2.
    """
    sharing: Dict[str, List[CategoryPath]] = defaultdict(list)
    for path in paths:
        sharing[node_label(path)].append(path)

    used = {label for label, group in sharing.items() if len(group) == 1}
    labels: Dict[CategoryPath, str] = {}
    for base, group in sharing.items():
        if len(group) == 1:
            labels[group[0]] = base
            continue
        suffix = 0
        for path in group:
            suffix += 1
            while f"{base}{suffix}" in used:
                suffix += 1
            labels[path] = f"{base}{suffix}"
            used.add(labels[path])
    return labels


def _node_paths(tree: CategoryTree, paths: Mapping[str, CategoryPath]) -> List[Tuple[ClusterNode, CategoryPath]]:
    """Breadth-first (node, category path) pairs, root excluded."""
    by_node: Dict[int, CategoryPath] = {}
    for item, ancestors in tree.item_paths().items():
        for depth, node in enumerate(ancestors, start=1):
            by_node[id(node)] = paths[item][:depth]
    return [(node, by_node[id(node)]) for node in tree.nodes()]


def index_semid(
    items: Sequence[str],
    metadata: Mapping[str, ItemMeta],
    mode: str = "tree",
    registry: Optional[TokenRegistry] = None,
) -> IndexAssignment:
    if mode not in config.SEMID_MODES:
        raise ArgumentError(f"Unknown SemID mode {mode!r}; choose from {', '.join(config.SEMID_MODES)}")
    registry = registry or TokenRegistry()
    tree, paths = build_category_tree(items, metadata)

    node_paths = _node_paths(tree, paths)
    ordered = [path for _, path in node_paths]
    if mode == "tree":
        labels = _tree_labels(ordered)
    else:
        labels = {path: node_label(path) for path in ordered}
    for node, path in node_paths:
        node.token = registry.register_extra(labels[path])

    # leaf counters are keyed by the token prefix, so merged non-tree names never reuse a counter
    counters: Counter = Counter()
    ids: Dict[str, TokenIds] = {}
    for item, path in tree.item_paths().items():
        prefix = tuple(node.token for node in path)
        leaf = registry.register_extra(str(counters[prefix]))
        counters[prefix] += 1
        holder_of(path, tree).item_tokens[item] = leaf
        ids[item] = prefix + (leaf,)

    ids = {item: ids[item] for item in items}
    logger.info(f"SemID ({mode}): indexed {len(ids)} items over {len(ordered)} categories")
    return IndexAssignment(Scheme.SEMID, ids, registry, params={"mode": mode}, tree=tree).ensure_unique()
