"""Graph-theoretic bound certificates for controllable-subspace dimensions.

Lower bounds come from distance partitions: on a tree, a positive definite
path from the leader to the farthest distance cell forces dimension at
least d times the number of cells, with specialized constants for cycles
and complete graphs. The upper bound comes from almost equitable
partitions: when every input column block is constant on each cell, the
controllable subspace stays inside the characteristic image, capping the
dimension at d times the cell count. Finally, a reducible AEP yields
explicit input matrices that are provably uncontrollable.

Every certificate records which hypotheses were checked and their
outcomes; when a hypothesis fails the operation returns None instead of a
certificate (no claim), while a failed structural precondition (not a
tree, not a cycle, ...) raises, keeping the two signals distinct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from . import graph as graphmod
from . import linalg
from . import partition as partmod
from .controllability import GeneralInputMatrix, InputMatrix, controllable_subspace
from .graph import MatrixWeightedGraph, laplacian
from .partition import NodePartition, characteristic_matrix, is_almost_equitable


class StructureError(ValueError):
    """A structural precondition (tree / cycle / complete / path) failed."""


class NotATreeError(StructureError):
    pass


class NotACycleError(StructureError):
    pass


class NotCompleteError(StructureError):
    pass


class NotAPathGraphError(StructureError):
    pass


class NotAnEndpointError(StructureError):
    pass


class NotReducibleError(ValueError):
    pass


class COutOfRangeError(ValueError):
    pass


class TrivialPartitionError(ValueError):
    pass


class InputConditionError(ValueError):
    """An explicit leader choice violates the per-cell count condition."""


class CertificateKind(Enum):
    LOWER_TREE = "lower_tree"
    LOWER_CYCLE = "lower_cycle"
    LOWER_COMPLETE = "lower_complete"
    PATH_CONTROLLABILITY = "path_controllability"
    UPPER_AEP = "upper_aep"
    UNCONTROLLABLE_B = "uncontrollable_b"


@dataclass(frozen=True)
class BoundCertificate:
    """A dimension bound together with the hypotheses that justify it.

    direction is "lower" (dim >= value) or "upper" (dim <= value). The
    hypothesis dict is JSON-safe and lists every checked condition.
    """

    kind: CertificateKind
    value: int
    direction: str
    hypothesis: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "direction": self.direction,
            "hypothesis": self.hypothesis,
        }


def lower_bound_tree(g: MatrixWeightedGraph, leader: int) -> BoundCertificate | None:
    """Distance-partition lower bound d * (number of cells) on a tree.

    Requires some node of the farthest cell whose (unique) path from the
    leader is positive definite; returns None when no such witness exists.
    """
    if not graphmod.is_tree(g):
        raise NotATreeError("graph is not a tree (connected with n-1 edges)")
    pi = partmod.distance_partition(g, leader)
    witness = None
    for v in pi.cells[-1]:
        path = graphmod.pd_shortest_path(g, leader, v)
        if path is not None:
            witness = (v, path)
            break
    if witness is None:
        return None
    return BoundCertificate(
        CertificateKind.LOWER_TREE,
        g.d * pi.s,
        "lower",
        {
            "leader": leader,
            "cells": [list(c) for c in pi.cells],
            "witness_node": witness[0],
            "witness_path": witness[1],
        },
    )


def path_controllability(g: MatrixWeightedGraph, endpoint: int) -> BoundCertificate:
    """Exact controllability verdict for a path graph led from an endpoint.

    The pair is controllable if and only if every edge of the path is
    positive definite. A controllable verdict is the lower bound dn (hence
    exact); an uncontrollable one is the upper bound dn - 1.
    """
    if not graphmod.is_path_graph(g):
        raise NotAPathGraphError("graph is not a path")
    if endpoint not in graphmod.path_endpoints(g):
        raise NotAnEndpointError(f"node {endpoint} is not a path endpoint")
    order = graphmod.path_node_order(g, endpoint)
    non_pd = None
    for u, v in zip(order, order[1:]):
        if g.weight_kind(u, v) is not linalg.Definiteness.POSITIVE_DEFINITE:
            non_pd = [u, v]
            break
    controllable = non_pd is None
    dn = g.n * g.d
    return BoundCertificate(
        CertificateKind.PATH_CONTROLLABILITY,
        dn if controllable else dn - 1,
        "lower" if controllable else "upper",
        {
            "endpoint": endpoint,
            "all_edges_pd": controllable,
            "controllable": controllable,
            "first_non_pd_edge": non_pd,
        },
    )


def lower_bound_cycle(g: MatrixWeightedGraph, leader: int) -> BoundCertificate | None:
    """Distance-partition lower bound on a cycle.

    With a positive definite shortest path from the leader to the farthest
    cell (either arc qualifies for the even antipode), the bound is
    d * n/2 + 1 for even n and d * (n+1)/2 for odd n.
    """
    if not graphmod.is_cycle_graph(g):
        raise NotACycleError("graph is not a cycle")
    pi = partmod.distance_partition(g, leader)
    witness = None
    for v in pi.cells[-1]:
        path = graphmod.pd_shortest_path(g, leader, v)
        if path is not None:
            witness = (v, path)
            break
    if witness is None:
        return None
    if g.n % 2 == 0:
        value = g.d * (g.n // 2) + 1
    else:
        value = g.d * ((g.n + 1) // 2)
    return BoundCertificate(
        CertificateKind.LOWER_CYCLE,
        value,
        "lower",
        {
            "leader": leader,
            "cycle_length": g.n,
            "witness_node": witness[0],
            "witness_path": witness[1],
        },
    )


def lower_bound_complete(g: MatrixWeightedGraph, leader: int) -> BoundCertificate | None:
    """Lower bound d on a complete graph with a PD edge at the leader."""
    if not graphmod.is_complete(g):
        raise NotCompleteError("graph is not complete")
    witness = None
    for v in g.neighbors(leader):
        if g.weight_kind(leader, v) is linalg.Definiteness.POSITIVE_DEFINITE:
            witness = v
            break
    if witness is None:
        return None
    return BoundCertificate(
        CertificateKind.LOWER_COMPLETE,
        g.d,
        "lower",
        {"leader": leader, "witness_node": witness},
    )


def _input_blocks(B, n: int, d: int) -> np.ndarray | None:
    """View a block 0/1 input as an n x k array of {0, 1} block flags.

    Returns None when some d x d block is neither the zero matrix nor the
    identity, or when the column count is not a multiple of d.
    """
    Bm = linalg.as_matrix(B)
    if Bm.ndim == 1:
        Bm = Bm.reshape(-1, 1)
    if Bm.shape[0] != n * d or Bm.shape[1] % d != 0:
        return None
    k = Bm.shape[1] // d
    flags = np.zeros((n, k), dtype=int)
    eye = np.eye(d)
    for i in range(n):
        for c in range(k):
            blk = Bm[i * d:(i + 1) * d, c * d:(c + 1) * d]
            if np.array_equal(blk, eye):
                flags[i, c] = 1
            elif not blk.any():
                flags[i, c] = 0
            else:
                return None
    return flags


def upper_bound_aep(
    g: MatrixWeightedGraph,
    pi: NodePartition,
    B,
    tol: float = linalg.DEFAULT_RANK_TOL,
    aep_tol: float | None = None,
) -> BoundCertificate | None:
    """AEP upper bound d * s when every input column block is cell-constant.

    Raises NotAEPError / TrivialPartitionError on bad partitions; returns
    None when the input fails the cell-constancy hypothesis. The emitted
    certificate also records the numerically verified containment of the
    controllable subspace in the characteristic image.
    """
    if pi.n != g.n:
        raise partmod.PartitionError(f"partition covers {pi.n} nodes, graph has {g.n}")
    if pi.s >= g.n:
        raise TrivialPartitionError("the singleton partition gives no bound (s = n)")
    check = is_almost_equitable(g, pi, aep_tol)
    if not check:
        v = check.violation
        raise partmod.NotAEPError(
            f"partition is not almost equitable (cells {v.cell_i}/{v.cell_j}, "
            f"nodes {v.node_v}/{v.node_w})"
        )
    flags = _input_blocks(B, g.n, g.d)
    if flags is None:
        return None
    for cell in pi.cells:
        rows = flags[list(cell), :]
        if not np.all(rows == rows[0]):
            return None
    lap = laplacian(g)
    space = controllable_subspace(lap, B, tol)
    char_image = linalg.orthonormal_basis(characteristic_matrix(pi, g.d).matrix, tol)
    contained = linalg.subspace_contains(char_image, space, tol)
    return BoundCertificate(
        CertificateKind.UPPER_AEP,
        g.d * pi.s,
        "upper",
        {
            "cells": [list(c) for c in pi.cells],
            "cell_constant_input": True,
            "containment_verified": bool(contained),
            "exact_dim": space.dim,
        },
    )


def partition_gcd(pi: NodePartition) -> int:
    """Greatest common divisor of the cell sizes."""
    return reduce(math.gcd, (len(c) for c in pi.cells))


def input_count_condition(pi: NodePartition, nodes, c: int) -> bool:
    """Check that a node set selects exactly c * q_j members of each cell j."""
    g0 = partition_gcd(pi)
    chosen = set(int(v) for v in nodes)
    for cell in pi.cells:
        q = len(cell) // g0
        if len(chosen & set(cell)) != c * q:
            return False
    return True


def construct_uncontrollable_input(
    g: MatrixWeightedGraph,
    pi: NodePartition,
    c: int,
    nodes=None,
    aep_tol: float | None = None,
) -> GeneralInputMatrix:
    """Build a multi-node selector input that makes (L, B) uncontrollable.

    Requires a non-trivial (s >= 2) almost equitable partition whose cell
    sizes share a common divisor gcd >= 2 and an integer 1 <= c <= gcd - 1.
    Identity blocks are placed at c * q_j nodes of each cell j
    (q_j = |cell_j| / gcd), by default at the lowest-indexed members; an
    explicit node list is accepted and validated against the same per-cell
    counts.

    The single-cell partition is rejected even when reducible: its
    characteristic image is exactly the ones-block span, so no deficient
    eigendirection survives inside it and the construction can produce a
    controllable pair (two nodes with one PD edge, leading one node, is a
    counterexample).
    """
    if pi.n != g.n:
        raise partmod.PartitionError(f"partition covers {pi.n} nodes, graph has {g.n}")
    if pi.s < 2:
        raise TrivialPartitionError(
            "the construction needs a non-trivial partition (at least two cells)"
        )
    check = is_almost_equitable(g, pi, aep_tol)
    if not check:
        raise partmod.NotAEPError("partition is not almost equitable")
    g0 = partition_gcd(pi)
    if g0 < 2:
        raise NotReducibleError(
            f"cell sizes {[len(cc) for cc in pi.cells]} have gcd 1; no reducible choice exists"
        )
    if not (1 <= c <= g0 - 1):
        raise COutOfRangeError(f"c must satisfy 1 <= c <= {g0 - 1}, got {c}")
    if nodes is None:
        chosen: list[int] = []
        for cell in pi.cells:
            q = len(cell) // g0
            chosen.extend(cell[: c * q])
    else:
        chosen = sorted(int(v) for v in nodes)
        if len(set(chosen)) != len(chosen):
            raise InputConditionError("node list contains duplicates")
        if not input_count_condition(pi, chosen, c):
            raise InputConditionError(
                "node list does not select c*q_j members of every cell"
            )
    return GeneralInputMatrix.from_nodes(g.n, g.d, chosen)


def uncontrollable_input_certificate(
    g: MatrixWeightedGraph,
    pi: NodePartition,
    c: int,
    nodes=None,
    tol: float = linalg.DEFAULT_RANK_TOL,
    aep_tol: float | None = None,
) -> tuple[GeneralInputMatrix, BoundCertificate]:
    """Construct the uncontrollable input and verify its dimension deficit."""
    B = construct_uncontrollable_input(g, pi, c, nodes, aep_tol)
    g0 = partition_gcd(pi)
    space = controllable_subspace(laplacian(g), B, tol)
    dn = g.n * g.d
    cert = BoundCertificate(
        CertificateKind.UNCONTROLLABLE_B,
        dn - 1,
        "upper",
        {
            "cells": [list(cc) for cc in pi.cells],
            "gcd": g0,
            "q": [len(cc) // g0 for cc in pi.cells],
            "c": c,
            "nodes": list(B.nodes),
            "exact_dim": space.dim,
            "verified_uncontrollable": space.dim < dn,
        },
    )
    return B, cert


def applicable_certificates(
    g: MatrixWeightedGraph,
    leaders,
    tol: float = linalg.DEFAULT_RANK_TOL,
    aep_tol: float | None = None,
) -> tuple[BoundCertificate, ...]:
    """Every bound certificate whose structural precondition the graph meets.

    Single-leader graphs are probed for the path / tree / cycle / complete
    lower bounds; any leader set is probed for the AEP upper bound through
    the coarsest refinement of the partition that isolates each leader in
    its own cell (which makes the leader-selection input cell-constant by
    construction).
    """
    leaders = tuple(int(v) for v in leaders)
    if not graphmod.is_connected(g) or not leaders:
        return ()
    certs: list[BoundCertificate] = []
    if len(leaders) == 1:
        leader = leaders[0]
        if graphmod.is_path_graph(g) and leader in graphmod.path_endpoints(g):
            certs.append(path_controllability(g, leader))
        if graphmod.is_tree(g):
            cert = lower_bound_tree(g, leader)
            if cert is not None:
                certs.append(cert)
        if graphmod.is_cycle_graph(g):
            cert = lower_bound_cycle(g, leader)
            if cert is not None:
                certs.append(cert)
        if graphmod.is_complete(g):
            cert = lower_bound_complete(g, leader)
            if cert is not None:
                certs.append(cert)
    followers = sorted(set(range(g.n)) - set(leaders))
    initial_cells = [[v] for v in sorted(leaders)]
    if followers:
        initial_cells.append(followers)
    refined = partmod.coarsest_aep_refinement(g, partmod.make_partition(initial_cells), aep_tol)
    if refined.s < g.n:
        cert = upper_bound_aep(g, refined, InputMatrix(leaders, g.n, g.d), tol, aep_tol)
        if cert is not None:
            certs.append(cert)
    return tuple(certs)
