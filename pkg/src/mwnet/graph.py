"""Matrix-weighted graphs and their block Laplacians.

Nodes are 0-based integers. Each undirected edge carries a symmetric
positive semidefinite or positive definite d-by-d weight; indefinite
weights are rejected at construction because every downstream result
relies on them being excluded. Path queries (distance, diameter,
positive definite paths) count hops and ignore weight magnitude.

This module owns the graph JSON schema consumed by the CLI:

    {"n": int, "d": int, "edges": [{"i": int, "j": int, "w": [[...], ...]}]}

with "w" a row-major d x d float matrix and 0-based node indices in files;
human-readable reports echo 1-based labels alongside.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import Definiteness, DimensionMismatchError


class GraphError(ValueError):
    """Base class for graph construction and query errors."""


class AsymmetricWeightError(GraphError):
    pass


class IndefiniteWeightError(GraphError):
    pass


class ZeroWeightError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


class NotAPathError(GraphError):
    pass


class UnreachableError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixWeight:
    """A symmetric PSD or PD edge weight with its definiteness class."""

    entries: np.ndarray
    kind: Definiteness


class MatrixWeightedGraph:
    """Immutable undirected graph with matrix-valued edge weights.

    Construct through :func:`build_graph`, which validates and classifies
    every weight. Weights are stored once per unordered pair, which makes
    A_ij = A_ji structural rather than a numeric property.
    """

    def __init__(self, n: int, d: int, weights: dict[tuple[int, int], MatrixWeight]):
        self._n = int(n)
        self._d = int(d)
        self._weights = dict(weights)
        adj: list[list[int]] = [[] for _ in range(self._n)]
        for (i, j) in self._weights:
            adj[i].append(j)
            adj[j].append(i)
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def d(self) -> int:
        return self._d

    @property
    def num_edges(self) -> int:
        return len(self._weights)

    def edges(self):
        """Sorted (i, j, MatrixWeight) triples with i < j."""
        for (i, j) in sorted(self._weights):
            yield i, j, self._weights[(i, j)]

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._weights

    def weight(self, i: int, j: int) -> np.ndarray:
        """The d x d weight on edge (i, j); the zero matrix when absent."""
        w = self._weights.get((min(i, j), max(i, j)))
        if w is None:
            return np.zeros((self._d, self._d))
        return w.entries

    def weight_kind(self, i: int, j: int) -> Definiteness:
        w = self._weights.get((min(i, j), max(i, j)))
        return Definiteness.ZERO if w is None else w.kind

    def max_weight_entry(self) -> float:
        """Largest |entry| over all edge weights (0.0 for the edgeless graph)."""
        best = 0.0
        for w in self._weights.values():
            best = max(best, float(np.max(np.abs(w.entries))))
        return best

    def subgraph_with_kinds(self, kinds) -> "MatrixWeightedGraph":
        """The spanning subgraph keeping only edges whose kind is in ``kinds``."""
        kinds = set(kinds)
        kept = {e: w for e, w in self._weights.items() if w.kind in kinds}
        return MatrixWeightedGraph(self._n, self._d, kept)


def build_graph(
    n: int,
    d: int,
    edge_list,
    class_tol: float = linalg.DEFAULT_CLASS_TOL,
    sym_tol: float = linalg.DEFAULT_SYM_TOL,
) -> MatrixWeightedGraph:
    """Validate an edge list and build a matrix-weighted graph.

    edge_list contains (i, j, weight) triples with 0 <= i, j < n, i != j and
    weight a symmetric PSD or PD d x d matrix. Raises SelfLoopError,
    DuplicateEdgeError, DimensionMismatchError, AsymmetricWeightError,
    ZeroWeightError or IndefiniteWeightError on invalid input.
    """
    if n < 1:
        raise GraphError(f"node count must be positive, got {n}")
    if d < 1:
        raise GraphError(f"block dimension must be positive, got {d}")
    weights: dict[tuple[int, int], MatrixWeight] = {}
    for i, j, w in edge_list:
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge ({i}, {j}) references a node outside 0..{n - 1}")
        if i == j:
            raise SelfLoopError(f"self-loop at node {i}")
        key = (min(i, j), max(i, j))
        if key in weights:
            raise DuplicateEdgeError(f"edge ({key[0]}, {key[1]}) given twice")
        w = np.asarray(w, dtype=float)
        if w.shape != (d, d):
            raise DimensionMismatchError(
                f"edge ({i}, {j}) weight has shape {w.shape}, expected ({d}, {d})"
            )
        if not linalg.is_symmetric(w, sym_tol):
            raise AsymmetricWeightError(f"edge ({i}, {j}) weight is not symmetric")
        kind = linalg.classify_definiteness(w, class_tol, sym_tol)
        if kind is Definiteness.INDEFINITE:
            raise IndefiniteWeightError(
                f"edge ({i}, {j}) weight has a negative eigenvalue"
            )
        if kind is Definiteness.ZERO:
            raise ZeroWeightError(f"edge ({i}, {j}) weight is the zero matrix")
        weights[key] = MatrixWeight(w, kind)
    return MatrixWeightedGraph(n, d, weights)


def adjacency_matrix(g: MatrixWeightedGraph) -> np.ndarray:
    """The dn x dn block adjacency matrix."""
    d = g.d
    A = np.zeros((g.n * d, g.n * d))
    for i, j, w in g.edges():
        A[i * d:(i + 1) * d, j * d:(j + 1) * d] = w.entries
        A[j * d:(j + 1) * d, i * d:(i + 1) * d] = w.entries
    return A


def node_degree(g: MatrixWeightedGraph, i: int) -> np.ndarray:
    """Sum of the weights on edges incident to node i (d x d)."""
    D = np.zeros((g.d, g.d))
    for j in g.neighbors(i):
        D += g.weight(i, j)
    return D


def degree_matrix(g: MatrixWeightedGraph) -> np.ndarray:
    """Block-diagonal dn x dn matrix of per-node summed incident weights."""
    d = g.d
    D = np.zeros((g.n * d, g.n * d))
    for i in range(g.n):
        D[i * d:(i + 1) * d, i * d:(i + 1) * d] = node_degree(g, i)
    return D


@dataclass(frozen=True, eq=False)
class BlockLaplacian:
    """Dense dn x dn Laplacian with its block structure metadata.

    Symmetric, block row sums vanish (L applied to the stacked identity
    blocks is zero) and the spectrum is nonnegative because all weights
    are PSD.
    """

    matrix: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        dn = self.n * self.d
        if self.matrix.shape != (dn, dn):
            raise DimensionMismatchError(
                f"Laplacian shape {self.matrix.shape} does not match n={self.n}, d={self.d}"
            )
        scale = max(1.0, float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0)
        if float(np.max(np.abs(self.matrix - self.matrix.T), initial=0.0)) > 1e-9 * scale:
            raise GraphError("Laplacian is not symmetric")
        ones = np.tile(np.eye(self.d), (self.n, 1))
        if float(np.max(np.abs(self.matrix @ ones), initial=0.0)) > 1e-9 * scale:
            raise GraphError("Laplacian block row sums do not vanish")

    @property
    def total_dim(self) -> int:
        return self.n * self.d

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.d
        return self.matrix[i * d:(i + 1) * d, j * d:(j + 1) * d]


def laplacian(g: MatrixWeightedGraph) -> BlockLaplacian:
    """L = D - A for the graph's degree and adjacency matrices."""
    return BlockLaplacian(degree_matrix(g) - adjacency_matrix(g), g.n, g.d)


def _bfs_levels(g: MatrixWeightedGraph, source: int) -> list[int | None]:
    """Hop distance from source to every node; None where unreachable."""
    dist: list[int | None] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if dist[v] is None:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def distance(g: MatrixWeightedGraph, i: int, j: int) -> int | None:
    """Minimum edge count over paths i -> j; 0 when i == j; None if unreachable."""
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise GraphError(f"node index out of range: ({i}, {j})")
    if i == j:
        return 0
    return _bfs_levels(g, i)[j]


def is_connected(g: MatrixWeightedGraph) -> bool:
    return all(dv is not None for dv in _bfs_levels(g, 0))


def diameter(g: MatrixWeightedGraph) -> int:
    """Maximum pairwise hop distance. Raises DisconnectedError."""
    best = 0
    for i in range(g.n):
        levels = _bfs_levels(g, i)
        for dv in levels:
            if dv is None:
                raise DisconnectedError("diameter is undefined on a disconnected graph")
            best = max(best, dv)
    return best


def pd_shortest_path(g: MatrixWeightedGraph, source: int, target: int) -> list[int] | None:
    """A shortest path of g from source to target using only PD edges.

    Returns the node sequence when the positive-definite subgraph realizes
    the full graph's hop distance, None otherwise (including the case where
    target is unreachable even in g).
    """
    full = distance(g, source, target)
    if full is None:
        return None
    if source == target:
        return [source]
    pd_sub = g.subgraph_with_kinds({Definiteness.POSITIVE_DEFINITE})
    parent: list[int | None] = [None] * g.n
    dist: list[int | None] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in pd_sub.neighbors(u):
            if dist[v] is None:
                dist[v] = dist[u] + 1
                parent[v] = u
                queue.append(v)
    if dist[target] != full:
        return None
    path = [target]
    while path[-1] != source:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def has_pd_shortest_path(g: MatrixWeightedGraph, source: int, target: int) -> bool:
    """True iff some shortest path from source to target uses only PD edges.

    Equivalent to the hop distance in the PD-edge subgraph matching the hop
    distance in g, which avoids enumerating paths. Raises UnreachableError
    when target cannot be reached at all.
    """
    if distance(g, source, target) is None:
        raise UnreachableError(f"node {target} is unreachable from {source}")
    return pd_shortest_path(g, source, target) is not None


def path_weight_product(g: MatrixWeightedGraph, node_sequence) -> np.ndarray:
    """Ordered product of edge weights along a path of nodes.

    The product is taken left to right along the sequence; it has full rank
    whenever every factor is positive definite. Raises NotAPathError when a
    consecutive pair is not an edge.
    """
    nodes = [int(v) for v in node_sequence]
    if not nodes:
        raise NotAPathError("empty node sequence")
    out = np.eye(g.d)
    for u, v in zip(nodes, nodes[1:]):
        if not g.has_edge(u, v):
            raise NotAPathError(f"({u}, {v}) is not an edge")
        out = out @ g.weight(u, v)
    return out


def is_tree(g: MatrixWeightedGraph) -> bool:
    return is_connected(g) and g.num_edges == g.n - 1


def is_cycle_graph(g: MatrixWeightedGraph) -> bool:
    return (
        g.n >= 3
        and g.num_edges == g.n
        and all(len(g.neighbors(i)) == 2 for i in range(g.n))
        and is_connected(g)
    )


def is_complete(g: MatrixWeightedGraph) -> bool:
    return g.num_edges == g.n * (g.n - 1) // 2


def is_path_graph(g: MatrixWeightedGraph) -> bool:
    if g.n == 1:
        return g.num_edges == 0
    if g.num_edges != g.n - 1 or not is_connected(g):
        return False
    degs = sorted(len(g.neighbors(i)) for i in range(g.n))
    return degs[0] == 1 and degs[1] == 1 and all(x == 2 for x in degs[2:])


def path_endpoints(g: MatrixWeightedGraph) -> tuple[int, ...]:
    """Degree-1 nodes of a path graph (the single node for n == 1)."""
    if g.n == 1:
        return (0,)
    return tuple(i for i in range(g.n) if len(g.neighbors(i)) == 1)


def path_node_order(g: MatrixWeightedGraph, endpoint: int) -> list[int]:
    """Nodes of a path graph in walk order starting from the given endpoint."""
    order = [endpoint]
    prev = None
    cur = endpoint
    for _ in range(g.n - 1):
        nxt = [v for v in g.neighbors(cur) if v != prev]
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def graph_to_json(g: MatrixWeightedGraph) -> dict:
    """Serialize to the graph JSON schema (0-based indices, row-major weights)."""
    return {
        "n": g.n,
        "d": g.d,
        "edges": [
            {"i": i, "j": j, "w": [[float(x) for x in row] for row in w.entries]}
            for i, j, w in g.edges()
        ],
    }


def graph_from_json(
    obj: dict,
    class_tol: float = linalg.DEFAULT_CLASS_TOL,
    sym_tol: float = linalg.DEFAULT_SYM_TOL,
) -> MatrixWeightedGraph:
    """Parse the graph JSON schema; raises GraphError on malformed input."""
    if not isinstance(obj, dict):
        raise GraphError("graph document must be a JSON object")
    for key in ("n", "d", "edges"):
        if key not in obj:
            raise GraphError(f"graph document is missing the '{key}' field")
    try:
        n = int(obj["n"])
        d = int(obj["d"])
    except (TypeError, ValueError) as exc:
        raise GraphError(f"invalid 'n' or 'd' field: {exc}") from None
    edge_list = []
    for k, e in enumerate(obj["edges"]):
        if not isinstance(e, dict) or not {"i", "j", "w"} <= set(e):
            raise GraphError(f"edge #{k} must be an object with 'i', 'j', 'w'")
        try:
            w = np.asarray(e["w"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise GraphError(f"edge #{k} weight is not numeric: {exc}") from None
        edge_list.append((int(e["i"]), int(e["j"]), w))
    return build_graph(n, d, edge_list, class_tol, sym_tol)
