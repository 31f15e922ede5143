import logging
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

import config
from corpus import CooccurrenceGraph
from errors import ArgumentError, ConstraintError, ConvergenceError
from tokenization import Token, TokenRegistry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LaplacianMatrix:
    items: Tuple[str, ...]
    matrix: sp.csr_matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass
class ClusterNode:
    children: List["ClusterNode"] = field(default_factory=list)
    items: List[str] = field(default_factory=list)
    token: Optional[Token] = None
    name: Optional[str] = None
    grouping: bool = False
    item_tokens: Dict[str, Token] = field(default_factory=dict)

    @property
    def is_final(self) -> bool:
        return not self.children

    def subtree_items(self) -> List[str]:
        out = list(self.items)
        for child in self.children:
            out.extend(child.subtree_items())
        return out

    def size(self) -> int:
        return len(self.items) + sum(child.size() for child in self.children)


@dataclass
class ClusterTree:
    """Recursive partition tree; final clusters are the nodes that hold items.

    The same structure carries category hierarchies, where ``name`` holds the
    category label and a node may hold items and children at once.
    """

    root: ClusterNode
    item_order: Dict[str, int]

    def first_position(self, node: ClusterNode) -> int:
        return min((self.item_order[item] for item in node.subtree_items()), default=len(self.item_order))

    def sort_children(self) -> None:
        stack = [self.root]
        while stack:
            node = stack.pop()
            node.children.sort(key=self.first_position)
            node.items.sort(key=self.item_order.__getitem__)
            stack.extend(node.children)

    def nodes(self) -> Iterator[ClusterNode]:
        """Breadth-first, root excluded."""
        queue = deque(self.root.children)
        while queue:
            node = queue.popleft()
            yield node
            queue.extend(node.children)

    def levels(self) -> List[List[ClusterNode]]:
        levels = []
        frontier = list(self.root.children)
        while frontier:
            levels.append(frontier)
            frontier = [child for node in frontier for child in node.children]
        return levels

    def final_clusters(self) -> List[ClusterNode]:
        holders = [self.root] if self.root.items else []
        return holders + [node for node in self.nodes() if node.items]

    def item_paths(self) -> Dict[str, List[ClusterNode]]:
        """Item -> ancestor nodes below the root, outermost first."""
        paths: Dict[str, List[ClusterNode]] = {}
        stack: List[Tuple[ClusterNode, List[ClusterNode]]] = [(self.root, [])]
        while stack:
            node, path = stack.pop()
            for item in node.items:
                paths[item] = path
            for child in node.children:
                stack.append((child, path + [child]))
        return {item: paths[item] for item in sorted(paths, key=self.item_order.__getitem__)}

    def depth(self) -> int:
        return max((len(path) + 1 for path in self.item_paths().values()), default=0)

    def to_dict(self) -> dict:
        return _node_to_dict(self.root)

    @classmethod
    def from_dict(cls, data: dict, registry: Optional[TokenRegistry] = None) -> "ClusterTree":
        registry = registry or TokenRegistry()
        order: Dict[str, int] = {}
        root = _node_from_dict(data, registry, order)
        return cls(root=root, item_order=order)


def _node_to_dict(node: ClusterNode) -> dict:
    out: dict = {"token": node.token.render() if node.token else None}
    if node.name is not None:
        out["name"] = node.name
    if node.grouping:
        out["grouping"] = True
    if node.children:
        out["children"] = [_node_to_dict(child) for child in node.children]
    if node.items:
        out["items"] = [
            {"item": item, "token": node.item_tokens[item].render() if item in node.item_tokens else None}
            for item in node.items
        ]
    return out


def _node_from_dict(data: dict, registry: TokenRegistry, order: Dict[str, int]) -> ClusterNode:
    node = ClusterNode(
        token=registry.parse(data["token"]) if data.get("token") else None,
        name=data.get("name"),
        grouping=bool(data.get("grouping", False)),
    )
    for entry in data.get("items", []):
        order.setdefault(entry["item"], len(order))
        node.items.append(entry["item"])
        if entry.get("token"):
            node.item_tokens[entry["item"]] = registry.parse(entry["token"])
    node.children = [_node_from_dict(child, registry, order) for child in data.get("children", [])]
    return node


def laplacian(graph: CooccurrenceGraph, items: Sequence[str]) -> LaplacianMatrix:
    """Symmetric normalised Laplacian I - D^-1/2 A D^-1/2 of the induced subgraph."""
    items = list(items)
    if not items:
        raise ArgumentError("laplacian needs at least one item")
    adjacency = graph.adjacency(items)
    matrix = sp.lil_matrix(csgraph.laplacian(adjacency, normed=True))
    # no self-loops, so every diagonal entry is 1; zero-degree rows become identity rows
    matrix.setdiag(1.0)
    return LaplacianMatrix(items=tuple(items), matrix=matrix.tocsr())


def _inf_norm(matrix: Union[sp.spmatrix, np.ndarray]) -> float:
    if sp.issparse(matrix):
        return float(abs(matrix).sum(axis=1).max()) if matrix.shape[0] else 0.0
    return float(np.abs(matrix).sum(axis=1).max()) if matrix.shape[0] else 0.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of every eigenvector is made positive
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _residuals(matrix, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return np.linalg.norm(matrix @ vectors - vectors * values, axis=0)


def _lanczos_smallest(matrix: sp.csr_matrix, m: int, tol: float, max_iter: int, seed: int, shift: float):
    n = matrix.shape[0]
    # shift*I - L turns the smallest eigenvalues of L into the largest of a PSD operator
    shifted = (sp.identity(n, format="csr") * shift - matrix).tocsr()
    v0 = np.random.default_rng(seed).uniform(0.5, 1.5, size=n)
    try:
        _, vectors = eigsh(
            shifted,
            k=m,
            which="LA",
            v0=v0,
            tol=tol * 1e-2,
            maxiter=max_iter,
            ncv=min(n, max(2 * m + 1, 20)),
        )
    except ArpackNoConvergence as e:
        if e.eigenvectors is not None and e.eigenvectors.size:
            residual = float(_residuals(matrix, shift - e.eigenvalues, e.eigenvectors).max())
        else:
            residual = float("inf")
        raise ConvergenceError(residual, max_iter)

    # Rayleigh-Ritz on the converged subspace restores orthonormality
    basis, _ = np.linalg.qr(vectors)
    projected = basis.T @ (matrix @ basis)
    values, rotation = np.linalg.eigh((projected + projected.T) / 2.0)
    return values, basis @ rotation


def smallest_eigenpairs(
    L: Union[LaplacianMatrix, sp.spmatrix, np.ndarray],
    m: int,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    method: str = "auto",
    seed: int = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """Smallest ``m`` eigenpairs of a symmetric matrix, eigenvalues ascending.

    ``method`` is "dense", "lanczos" or "auto" (dense up to
    ``config.DENSE_EIGEN_LIMIT`` rows). Every returned pair satisfies
    ||Lv - lambda v|| <= tol * max(1, ||L||_inf) or ConvergenceError is raised.
    """
    matrix = L.matrix if isinstance(L, LaplacianMatrix) else L
    tol = config.EIGEN_TOL if tol is None else tol
    max_iter = config.LANCZOS_MAX_ITER if max_iter is None else max_iter
    n = matrix.shape[0]
    if not 1 <= m <= n:
        raise ArgumentError(f"Requested {m} eigenpairs of a {n}x{n} matrix")
    if tol <= 0:
        raise ArgumentError(f"Tolerance must be positive, got {tol}")
    if method not in ("auto", "dense", "lanczos"):
        raise ArgumentError(f"Unknown eigensolver method {method!r}")

    norm = _inf_norm(matrix)
    if method == "auto":
        method = "dense" if n <= config.DENSE_EIGEN_LIMIT else "lanczos"
    if method == "lanczos" and m >= n - 1:
        logger.debug(f"{m} of {n} eigenpairs requested, using the dense solver")
        method = "dense"

    if method == "dense":
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=float)
        values, vectors = scipy.linalg.eigh(dense, subset_by_index=[0, m - 1])
    else:
        csr = sp.csr_matrix(matrix, dtype=float)
        values, vectors = _lanczos_smallest(csr, m, tol, max_iter, seed, shift=max(norm, 1.0))

    vectors = _fix_signs(vectors)
    residual = float(_residuals(matrix, values, vectors).max())
    if residual > tol * max(1.0, norm):
        raise ConvergenceError(residual, max_iter if method == "lanczos" else None)
    return values, vectors


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    # renumber clusters in order of first appearance
    mapping: Dict[int, int] = {}
    for label in labels:
        mapping.setdefault(int(label), len(mapping))
    return np.array([mapping[int(label)] for label in labels], dtype=int)


def kmeans(points: np.ndarray, clusters: int, seed: int) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if not 1 <= clusters <= n:
        raise ArgumentError(f"Cannot form {clusters} clusters from {n} points")
    if clusters == 1:
        return np.zeros(n, dtype=int)
    if clusters == n:
        return np.arange(n, dtype=int)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        model = KMeans(
            n_clusters=clusters,
            init="k-means++",
            n_init=config.KMEANS_RESTARTS,
            max_iter=config.KMEANS_MAX_ITER,
            random_state=seed,
        ).fit(points)
    return _canonical_labels(model.labels_)


def inertia(points: np.ndarray, labels: Sequence[int]) -> float:
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels)
    total = 0.0
    for label in np.unique(labels):
        members = points[labels == label]
        total += float(((members - members.mean(axis=0)) ** 2).sum())
    return total


def spectral_partition(graph: CooccurrenceGraph, items: Sequence[str], parts: int, seed: int) -> List[List[str]]:
    items = list(items)
    if not 1 <= parts <= len(items):
        raise ArgumentError(f"Cannot split {len(items)} items into {parts} parts")
    if parts == 1:
        return [items]
    if parts == len(items):
        return [[item] for item in items]

    _, vectors = smallest_eigenpairs(laplacian(graph, items), parts, seed=seed)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    labels = kmeans(vectors / norms, parts, seed)

    groups: Dict[int, List[str]] = {}
    for item, label in zip(items, labels):
        groups.setdefault(int(label), []).append(item)
    return sorted(groups.values(), key=lambda group: min(graph.index[item] for item in group))


def connected_groups(graph: CooccurrenceGraph, items: Sequence[str]) -> List[List[str]]:
    items = list(items)
    if not items:
        return []
    _, labels = csgraph.connected_components(graph.adjacency(items), directed=False)
    groups: Dict[int, List[str]] = {}
    for item, label in zip(items, labels):
        groups.setdefault(int(label), []).append(item)
    return list(groups.values())


def _pack_components(components: List[List[str]], count: int, order: Dict[str, int]) -> List[List[str]]:
    if len(components) <= count:
        return components
    bins: List[List[str]] = [[] for _ in range(count)]
    for component in sorted(components, key=lambda c: (-len(c), order[c[0]])):
        target = min(range(count), key=lambda b: (len(bins[b]), b))
        bins[target].extend(component)
    return [sorted(b, key=order.__getitem__) for b in bins]


def _balanced_chunks(items: List[str], count: int) -> List[List[str]]:
    return [list(chunk) for chunk in np.array_split(np.array(items, dtype=object), count) if len(chunk)]


def _partition(graph: CooccurrenceGraph, items: List[str], N: int, seed: int) -> List[List[str]]:
    count = min(N, len(items))
    components = connected_groups(graph, items)
    if len(components) > 1:
        parts = _pack_components(components, count, graph.index)
    else:
        parts = spectral_partition(graph, items, count, seed)

    if len(parts) < 2:
        logger.debug(f"Partition of {len(items)} items did not shrink, splitting by item order")
        parts = _balanced_chunks(items, count)
    return parts


def _wrap_in_groupings(children: List[ClusterNode], N: int, tree: ClusterTree) -> List[ClusterNode]:
    children = sorted(children, key=tree.first_position)
    while len(children) > N:
        take = min(N, len(children) - N + 1)
        smallest = sorted(children, key=lambda c: (c.size(), tree.first_position(c)))[:take]
        chosen = {id(node) for node in smallest}
        grouping = ClusterNode(children=sorted(smallest, key=tree.first_position), grouping=True)
        children = sorted([c for c in children if id(c) not in chosen] + [grouping], key=tree.first_position)
    return children


def build_cluster_tree(graph: CooccurrenceGraph, N: int, k: int, seed: int) -> ClusterTree:
    """Recursive spectral clustering until every final cluster has at most k items."""
    if N < 2:
        raise ConstraintError(f"N must be at least 2, got {N}")
    if N > k:
        raise ConstraintError(f"N={N} exceeds k={k}; siblings could not get distinct tokens")

    items = list(graph.nodes)
    tree = ClusterTree(root=ClusterNode(), item_order=dict(graph.index))
    if len(items) <= k:
        tree.root.items = items
        return tree

    isolated = [item for item in items if graph.degrees[graph.index[item]] == 0]
    linked = [item for item in items if graph.degrees[graph.index[item]] > 0]
    groups = [isolated[i:i + k] for i in range(0, len(isolated), k)] + connected_groups(graph, linked)

    pending = deque()
    if len(groups) == 1:
        tree.root.items = groups[0]
        pending.append(tree.root)
    else:
        children = []
        for group in groups:
            child = ClusterNode(items=group)
            children.append(child)
            if len(group) > k:
                pending.append(child)
        tree.root.children = _wrap_in_groupings(children, N, tree)

    while pending:
        node = pending.popleft()
        parts = _partition(graph, node.items, N, seed)
        logger.debug(f"Split {len(node.items)} items into {[len(part) for part in parts]}")
        node.items = []
        for part in parts:
            child = ClusterNode(items=part)
            node.children.append(child)
            if len(part) > k:
                pending.append(child)

    tree.sort_children()
    logger.info(f"Cluster tree: {len(tree.final_clusters())} final clusters, depth {tree.depth()} (N={N}, k={k})")
    return tree
