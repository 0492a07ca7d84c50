"""Controllable-subspace computation, verdicts, and a PBH-style cross-check.

The controlled consensus system is x' = -L x + B u with L the block
Laplacian and B a block 0/1 input matrix. The pair (L, B) is controllable
exactly when the controllable subspace (the smallest L-invariant subspace
containing img(B)) has full dimension dn. Verdicts carry the singular-value
gap observed at the rank decision so borderline cases are auditable, and
an independent eigenvector test certifies uncontrollability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .graph import BlockLaplacian, MatrixWeightedGraph, laplacian
from .linalg import DimensionMismatchError, NotSymmetricError, Subspace


class InputMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class InputMatrix:
    """Leader-selection input: one identity block per leader column block."""

    leaders: tuple[int, ...]
    n: int
    d: int

    def __post_init__(self):
        if len(set(self.leaders)) != len(self.leaders):
            raise InputMatrixError(f"duplicate leaders in {self.leaders}")
        for v in self.leaders:
            if not (0 <= v < self.n):
                raise InputMatrixError(f"leader {v} out of range 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.leaders)

    @property
    def matrix(self) -> np.ndarray:
        d = self.d
        B = np.zeros((self.n * d, self.m * d))
        for col, v in enumerate(self.leaders):
            B[v * d:(v + 1) * d, col * d:(col + 1) * d] = np.eye(d)
        return B


@dataclass(frozen=True, eq=False)
class GeneralInputMatrix:
    """Block 0/1 input whose column blocks may light up several nodes at once."""

    matrix: np.ndarray
    n: int
    d: int
    nodes: tuple[int, ...] | None = None  # set when built as a multi-node selector

    def __post_init__(self):
        if self.matrix.shape[0] != self.n * self.d:
            raise InputMatrixError(
                f"input matrix has {self.matrix.shape[0]} rows, expected {self.n * self.d}"
            )
        vals = np.unique(self.matrix)
        if not np.all(np.isin(vals, (0.0, 1.0))):
            raise InputMatrixError("input matrix entries must be 0 or 1")

    @classmethod
    def from_nodes(cls, n: int, d: int, nodes) -> "GeneralInputMatrix":
        """dn x d selector with an identity block at every listed node."""
        nodes = tuple(sorted(int(v) for v in nodes))
        B = np.zeros((n * d, d))
        for v in nodes:
            if not (0 <= v < n):
                raise InputMatrixError(f"node {v} out of range 0..{n - 1}")
            B[v * d:(v + 1) * d, :] = np.eye(d)
        return cls(B, n, d, nodes)


@dataclass(frozen=True)
class ControllabilityReport:
    """Outcome of a controllability analysis.

    dim is the controllable-subspace dimension, total = dn, and gap the
    smallest singular-value ratio seen at the rank decisions (math.inf for
    a perfectly clean cut). Bound certificates may be attached by callers.
    """

    dim: int
    total: int
    controllable: bool
    gap: float
    leaders: tuple[int, ...] = ()
    certificates: tuple = ()

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "total": self.total,
            "controllable": self.controllable,
            "gap": None if math.isinf(self.gap) else self.gap,
            "leaders": list(self.leaders),
            "certificates": [c.to_dict() for c in self.certificates],
        }


def controllable_subspace(L, B, tol: float = linalg.DEFAULT_RANK_TOL) -> Subspace:
    """The subspace reachable from img(B) under the dynamics of L."""
    return linalg.krylov_controllable_subspace(L, B, tol)


def is_controllable(
    g: MatrixWeightedGraph,
    leaders,
    tol: float = linalg.DEFAULT_RANK_TOL,
) -> ControllabilityReport:
    """Analyze controllability of the graph's consensus dynamics from leaders."""
    leaders = tuple(int(v) for v in leaders)
    B = InputMatrix(leaders, g.n, g.d)
    lap = laplacian(g)
    space = controllable_subspace(lap, B, tol)
    total = g.n * g.d
    return ControllabilityReport(
        dim=space.dim,
        total=total,
        controllable=space.dim == total,
        gap=space.gap,
        leaders=leaders,
    )


def pbh_witness(
    L,
    B,
    tol: float = linalg.DEFAULT_RANK_TOL,
    cluster_tol: float | None = None,
) -> tuple[float, np.ndarray] | None:
    """Search for an eigenvector of L orthogonal to the input image.

    Such a vector w (with B^T w = 0) certifies that (L, B) is uncontrollable;
    for symmetric L one exists if and only if the controllable subspace is
    deficient. The search runs per eigenspace: eigenvalues within
    cluster_tol (default 1e-8 * max(1, ||L||)) are treated as one eigenspace
    so that repeated eigenvalues, the generic cause of uncontrollability,
    are not split by rounding. Within each eigenspace the input image is
    projected out; any remainder yields a witness.

    Returns (eigenvalue, unit witness vector) or None.
    """
    Lm = linalg.as_matrix(L)
    Bm = linalg.as_matrix(B)
    if not linalg.is_symmetric(Lm):
        raise NotSymmetricError("PBH search requires a symmetric matrix")
    if Bm.ndim == 1:
        Bm = Bm.reshape(-1, 1)
    if Bm.shape[0] != Lm.shape[0]:
        raise DimensionMismatchError(
            f"input matrix has {Bm.shape[0]} rows, dynamics has {Lm.shape[0]}"
        )
    eigvals, eigvecs = np.linalg.eigh(Lm)
    scale = max(1.0, float(np.max(np.abs(eigvals))) if eigvals.size else 0.0)
    ctol = 1e-8 * scale if cluster_tol is None else cluster_tol

    start = 0
    nn = eigvals.size
    while start < nn:
        stop = start + 1
        while stop < nn and eigvals[stop] - eigvals[stop - 1] <= ctol:
            stop += 1
        V = eigvecs[:, start:stop]
        M = Bm.T @ V  # (dm) x r: coefficients of the eigenspace seen by the input
        if M.size == 0:
            coeff = np.zeros((V.shape[1], 1))
            coeff[0, 0] = 1.0
            null = coeff
        else:
            _, sv, Vt = np.linalg.svd(M, full_matrices=True)
            cut = tol * max(1.0, sv[0] if sv.size else 0.0)
            rank = int(np.count_nonzero(sv > cut))
            null = Vt[rank:, :].T
        if null.shape[1] > 0:
            w = V @ null[:, 0]
            w = w / np.linalg.norm(w)
            if float(np.linalg.norm(Bm.T @ w)) <= tol * math.sqrt(Lm.shape[0]):
                lam = float(np.mean(eigvals[start:stop]))
                return lam, w
        start = stop
    return None
