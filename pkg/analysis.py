import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from humanize import intcomma
from scipy.stats import spearmanr

import config
from corpus import CooccurrenceGraph, ItemMeta
from errors import ArgumentError, ConstraintError
from indexing import IndexAssignment, index_cid
from spectral import ClusterTree

logger = logging.getLogger(__name__)

MIN_CORRELATION_PAIRS = 10


@dataclass(frozen=True)
class Correlation:
    rho: float
    pairs: int
    degenerate: bool


def avg_id_length(assignment: IndexAssignment) -> float:
    if not len(assignment):
        raise ArgumentError("Average ID length of an empty assignment is undefined")
    return float(np.mean([len(tokens) for tokens in assignment.ids.values()]))


def shared_prefix_len(assignment: IndexAssignment, a: str, b: str) -> int:
    left, right = assignment.ids[a], assignment.ids[b]
    shared = 0
    for x, y in zip(left, right):
        if x != y:
            break
        shared += 1
    return shared


def overlap_cooccurrence_correlation(assignment: IndexAssignment, graph: CooccurrenceGraph) -> Correlation:
    """Spearman rho between edge weight and shared prefix length over positive-weight pairs."""
    weights, overlaps = [], []
    for (a, b), weight in graph.edges.items():
        if weight > 0 and a in assignment and b in assignment:
            weights.append(weight)
            overlaps.append(shared_prefix_len(assignment, a, b))

    pairs = len(weights)
    if pairs < MIN_CORRELATION_PAIRS or len(set(weights)) < 2 or len(set(overlaps)) < 2:
        logger.warning(f"Correlation is degenerate over {intcomma(pairs)} pair(s); reporting 0")
        return Correlation(rho=0.0, pairs=pairs, degenerate=True)

    rho, _ = spearmanr(weights, overlaps)
    if not np.isfinite(rho):
        return Correlation(rho=0.0, pairs=pairs, degenerate=True)
    return Correlation(rho=float(rho), pairs=pairs, degenerate=False)


def cluster_size_histogram(tree: Optional[ClusterTree]) -> Dict[int, int]:
    if tree is None:
        return {}
    sizes = Counter(len(cluster.items) for cluster in tree.final_clusters())
    return dict(sorted(sizes.items()))


def tree_depth(tree: Optional[ClusterTree]) -> int:
    return tree.depth() if tree is not None else 0


def extra_token_count(assignment: IndexAssignment) -> int:
    return len(assignment.extra_labels())


def non_tree_categories(metadata: Mapping[str, ItemMeta]) -> Dict[str, List[Tuple[str, ...]]]:
    """Category names found under more than one parent path."""
    parents: Dict[str, List[Tuple[str, ...]]] = defaultdict(list)
    for meta in metadata.values():
        for path in meta.category_paths:
            for depth in range(1, len(path)):
                parent = path[:depth]
                if parent not in parents[path[depth]]:
                    parents[path[depth]].append(parent)
    return {name: found for name, found in parents.items() if len(found) > 1}


def length_sweep(graph: CooccurrenceGraph, Ns: Iterable[int], ks: Iterable[int], seed: int) -> List[dict]:
    low, high = config.RECOMMENDED_LENGTH_BAND
    rows = []
    for N in Ns:
        for k in ks:
            try:
                assignment = index_cid(graph, N, k, seed)
            except ConstraintError as e:
                logger.warning(f"Skipping N={N}, k={k}: {str(e)}")
                continue
            avg_len = avg_id_length(assignment) if len(assignment) else 0.0
            rows.append({
                "N": N,
                "k": k,
                "avg_len": avg_len,
                "depth": tree_depth(assignment.tree),
                "extra_tokens": extra_token_count(assignment),
                "in_recommended_band": low <= avg_len <= high,
            })
            logger.info(f"Sweep N={N}, k={k}: average ID length {avg_len:.2f}")
    return rows
