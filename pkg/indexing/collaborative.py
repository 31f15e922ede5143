import logging
from typing import Optional

from corpus import CooccurrenceGraph
from indexing.base import IndexAssignment, Scheme, assign_tokens_to_tree, tree_ids
from spectral import build_cluster_tree
from tokenization import TokenRegistry

logger = logging.getLogger(__name__)


def index_cid(
    graph: CooccurrenceGraph,
    N: int,
    k: int,
    seed: int,
    registry: Optional[TokenRegistry] = None,
) -> IndexAssignment:
    """Items that co-occur often end up in the same subtree and share ID prefixes."""
    registry = registry or TokenRegistry()
    tree = build_cluster_tree(graph, N, k, seed)
    assign_tokens_to_tree(tree, k, registry)

    ids = tree_ids(tree)
    ids = {item: ids[item] for item in graph.nodes}
    logger.info(f"CID: indexed {len(ids)} items (N={N}, k={k})")
    return IndexAssignment(
        Scheme.CID,
        ids,
        registry,
        params={"N": N, "k": k, "seed": seed},
        tree=tree,
    ).ensure_unique()
