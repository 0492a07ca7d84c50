"""Node partitions and their matrix-valued machinery.

Characteristic matrices, distance partitions, almost-equitable-partition
(AEP) checking and refinement, quotient graphs, and the Laplacian
invariance certificate. A partition is almost equitable when every node of
a cell has the same matrix-valued degree toward every other cell; that is
exactly the condition under which the image of the characteristic matrix
is invariant under the block Laplacian.

Partition JSON schema owned here: {"cells": [[node ids], ...]} with
0-based indices. Quotient graphs export to DOT with the d x d weight
serialized into the edge label.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from . import linalg
from .graph import BlockLaplacian, DisconnectedError, MatrixWeightedGraph

# Relative factor for the default AEP equality tolerance.
DEFAULT_AEP_RTOL = 1e-9


class PartitionError(ValueError):
    """Base class for partition construction and query errors."""


class NotAEPError(PartitionError):
    pass


@dataclass(frozen=True)
class NodePartition:
    """Ordered disjoint nonempty cells covering {0, ..., n-1}.

    Nodes inside a cell are stored sorted; cell order is preserved as given
    (distance partitions order by radius, refinements by smallest member).
    """

    cells: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.cells)

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cells)

    def cell_of(self, node: int) -> int:
        for k, cell in enumerate(self.cells):
            if node in cell:
                return k
        raise PartitionError(f"node {node} is not covered by the partition")

    def to_json(self) -> dict:
        return {"cells": [list(c) for c in self.cells]}


def make_partition(cells) -> NodePartition:
    """Validate cell lists: disjoint, nonempty, covering a 0-based range."""
    norm = []
    seen: set[int] = set()
    for cell in cells:
        members = sorted(int(v) for v in cell)
        if not members:
            raise PartitionError("empty cell")
        for v in members:
            if v < 0:
                raise PartitionError(f"negative node id {v}")
            if v in seen:
                raise PartitionError(f"node {v} appears in two cells")
            seen.add(v)
        norm.append(tuple(members))
    if not norm:
        raise PartitionError("partition has no cells")
    n = len(seen)
    if max(seen) != n - 1:
        raise PartitionError("cells must cover 0..n-1 without holes")
    return NodePartition(tuple(norm))


def partition_from_json(obj: dict) -> NodePartition:
    if not isinstance(obj, dict) or "cells" not in obj:
        raise PartitionError("partition document must be an object with 'cells'")
    return make_partition(obj["cells"])


def singletons(n: int) -> NodePartition:
    return NodePartition(tuple((i,) for i in range(n)))


def single_cell(n: int) -> NodePartition:
    return NodePartition((tuple(range(n)),))


@dataclass(frozen=True, eq=False)
class CharacteristicMatrix:
    """dn x ds block 0/1 matrix whose block columns indicate cell membership."""

    matrix: np.ndarray
    partition: NodePartition
    d: int


def characteristic_matrix(partition: NodePartition, d: int) -> CharacteristicMatrix:
    """Block column j holds the identity at every node of cell j."""
    n, s = partition.n, partition.s
    P = np.zeros((n * d, s * d))
    for j, cell in enumerate(partition.cells):
        for v in cell:
            P[v * d:(v + 1) * d, j * d:(j + 1) * d] = np.eye(d)
    return CharacteristicMatrix(P, partition, d)


def selector_matrix(n: int, d: int, nodes) -> np.ndarray:
    """dn x d block matrix with the identity at every listed node.

    The single-column-block indicator used both for characteristic matrix
    columns and for multi-node input matrices.
    """
    B = np.zeros((n * d, d))
    for v in nodes:
        B[int(v) * d:(int(v) + 1) * d, :] = np.eye(d)
    return B


def distance_partition(g: MatrixWeightedGraph, leader: int) -> NodePartition:
    """Cells of nodes grouped by hop distance from the leader, ordered by radius."""
    if not (0 <= leader < g.n):
        raise graphmod.GraphError(f"leader index {leader} out of range")
    levels = graphmod._bfs_levels(g, leader)
    if any(dv is None for dv in levels):
        raise DisconnectedError("distance partition requires a connected graph")
    radius = max(levels)
    cells = [tuple(sorted(v for v in range(g.n) if levels[v] == r)) for r in range(radius + 1)]
    return NodePartition(tuple(cells))


def relative_degree(g: MatrixWeightedGraph, v: int, cell) -> np.ndarray:
    """Sum of the weights from v to its neighbors inside the given node set."""
    D = np.zeros((g.d, g.d))
    members = set(int(u) for u in cell)
    for u in g.neighbors(v):
        if u in members:
            D += g.weight(v, u)
    return D


def default_aep_tol(g: MatrixWeightedGraph) -> float:
    """1e-9 relative to the largest weight entry (at least 1e-9 absolute)."""
    return DEFAULT_AEP_RTOL * max(1.0, g.max_weight_entry())


@dataclass(frozen=True)
class AepViolation:
    """A witness pair breaking the equal-relative-degree condition."""

    cell_i: int
    cell_j: int
    node_v: int
    node_w: int
    deviation: float


@dataclass(frozen=True)
class AepCheck:
    holds: bool
    violation: AepViolation | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_almost_equitable(
    g: MatrixWeightedGraph,
    partition: NodePartition,
    aep_tol: float | None = None,
) -> AepCheck:
    """Check the AEP condition, returning a violating witness on failure.

    For every ordered pair of distinct cells (i, j) and every pair of nodes
    v, w in cell i, the relative degrees toward cell j must agree entrywise
    within aep_tol (default: 1e-9 relative to the largest weight entry).
    """
    if partition.n != g.n:
        raise PartitionError(
            f"partition covers {partition.n} nodes, graph has {g.n}"
        )
    tol = default_aep_tol(g) if aep_tol is None else aep_tol
    for i, cell_i in enumerate(partition.cells):
        if len(cell_i) == 1:
            continue
        for j, cell_j in enumerate(partition.cells):
            if i == j:
                continue
            degs = [relative_degree(g, v, cell_j) for v in cell_i]
            for a in range(len(cell_i)):
                for b in range(a + 1, len(cell_i)):
                    dev = float(np.max(np.abs(degs[b] - degs[a])))
                    if dev > tol:
                        return AepCheck(
                            False,
                            AepViolation(i, j, cell_i[a], cell_i[b], dev),
                        )
    return AepCheck(True)


@dataclass(frozen=True, eq=False)
class QuotientGraph:
    """Directed quotient of a graph over an AEP.

    Node k stands for cell k; the weight on (i -> j) is the common relative
    degree of cell i's nodes toward cell j, which need not equal the weight
    on (j -> i). The quotient Laplacian stacks these into a ds x ds matrix
    with diagonal blocks summing each row's outgoing weights.
    """

    partition: NodePartition
    d: int
    weights: dict[tuple[int, int], np.ndarray]
    laplacian: np.ndarray

    @property
    def s(self) -> int:
        return self.partition.s

    def edges(self):
        for (i, j) in sorted(self.weights):
            yield i, j, self.weights[(i, j)]

    def to_dot(self) -> str:
        """DOT digraph with 1-based cell labels and serialized weight matrices."""
        lines = ["digraph quotient {"]
        for k, cell in enumerate(self.partition.cells):
            members = ",".join(str(v + 1) for v in cell)
            lines.append(f'  c{k} [label="V{k + 1} = {{{members}}}"];')
        for i, j, w in self.edges():
            label = "[" + "; ".join(
                "[" + ", ".join(f"{x:g}" for x in row) + "]" for row in w
            ) + "]"
            lines.append(f'  c{i} -> c{j} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def quotient(
    g: MatrixWeightedGraph,
    partition: NodePartition,
    aep_tol: float | None = None,
    class_tol: float = linalg.DEFAULT_CLASS_TOL,
) -> QuotientGraph:
    """Build the directed quotient graph over an almost equitable partition.

    Raises NotAEPError when the partition fails the AEP check; the common
    relative degree is then read off the smallest-index node of each cell.
    """
    check = is_almost_equitable(g, partition, aep_tol)
    if not check:
        v = check.violation
        raise NotAEPError(
            f"partition is not almost equitable: nodes {v.node_v} and {v.node_w} "
            f"of cell {v.cell_i} differ toward cell {v.cell_j} by {v.deviation:g}"
        )
    d = g.d
    s = partition.s
    zero_cut = class_tol * max(1.0, g.max_weight_entry())
    weights: dict[tuple[int, int], np.ndarray] = {}
    Lq = np.zeros((s * d, s * d))
    for i, cell_i in enumerate(partition.cells):
        rep = cell_i[0]
        for j, cell_j in enumerate(partition.cells):
            if i == j:
                continue
            D = relative_degree(g, rep, cell_j)
            if float(np.max(np.abs(D))) > zero_cut:
                weights[(i, j)] = D
            Lq[i * d:(i + 1) * d, j * d:(j + 1) * d] = -D
            Lq[i * d:(i + 1) * d, i * d:(i + 1) * d] += D
    return QuotientGraph(partition, d, weights, Lq)


def laplacian_invariance_residual(lap: BlockLaplacian, partition: NodePartition) -> float:
    """Frobenius norm of L P - P L_q for the induced quotient Laplacian.

    L_q is assembled from the smallest-index representative of each cell by
    summing the representative's Laplacian block row over each cell, so the
    residual vanishes exactly when the partition is almost equitable and
    measures the worst within-cell disagreement otherwise.
    """
    if partition.n != lap.n:
        raise PartitionError(
            f"partition covers {partition.n} nodes, Laplacian has {lap.n}"
        )
    d = lap.d
    P = characteristic_matrix(partition, d).matrix
    LP = lap.matrix @ P
    reps = [cell[0] for cell in partition.cells]
    Lq = np.vstack([LP[rep * d:(rep + 1) * d, :] for rep in reps])
    return float(np.linalg.norm(LP - P @ Lq))


def coarsest_aep_refinement(
    g: MatrixWeightedGraph,
    initial: NodePartition,
    aep_tol: float | None = None,
) -> NodePartition:
    """Coarsest almost equitable partition refining the initial one.

    Iterated splitting: within each cell, nodes are grouped by the tuple of
    their relative-degree matrices toward every current cell (their own cell
    excluded), with entries quantized to the aep_tol grid for deterministic
    grouping. Repeats to a fixed point, reached within n rounds because the
    cell count strictly increases until then. Output cells are ordered by
    smallest contained node.
    """
    if initial.n != g.n:
        raise PartitionError(f"partition covers {initial.n} nodes, graph has {g.n}")
    tol = default_aep_tol(g) if aep_tol is None else aep_tol

    def signature(v: int, own: int, cells: list[tuple[int, ...]]):
        parts = []
        for j, cell in enumerate(cells):
            if j == own:
                continue
            D = relative_degree(g, v, cell)
            parts.append(tuple(int(q) for q in np.rint(D.ravel() / tol)))
        return tuple(parts)

    cells = [tuple(sorted(c)) for c in initial.cells]
    while True:
        new_cells: list[tuple[int, ...]] = []
        for own, cell in enumerate(cells):
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(signature(v, own, cells), []).append(v)
            # Deterministic split order: by lowest node index in each group.
            for members in sorted(groups.values(), key=lambda ms: ms[0]):
                new_cells.append(tuple(members))
        if len(new_cells) == len(cells):
            break
        cells = new_cells
    cells.sort(key=lambda c: c[0])
    return NodePartition(tuple(cells))
