"""Dense small-matrix numerics shared by the rest of the package.

Definiteness classification, numerical rank, orthonormal subspace
arithmetic, and the iterated-image computation of controllable subspaces.
Everything here is a pure function of its inputs; for a fixed input the
results are deterministic (LAPACK eigh/svd on identical arrays).

Rank and containment decisions are relative to the largest singular value.
Every subspace carries the singular-value gap observed at its rank
decision so that borderline verdicts can be audited downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# Relative tolerance for rank / containment decisions.
DEFAULT_RANK_TOL = 1e-8
# Relative tolerance under which an eigenvalue counts as zero.
DEFAULT_CLASS_TOL = 1e-9
# Relative tolerance for symmetry checks.
DEFAULT_SYM_TOL = 1e-9


class NotSymmetricError(ValueError):
    """Raised when an operation requires a symmetric matrix."""


class AmbientMismatchError(ValueError):
    """Raised when two subspaces live in different ambient spaces."""


class DimensionMismatchError(ValueError):
    """Raised when matrix shapes are incompatible."""


class Definiteness(Enum):
    ZERO = "zero"
    POSITIVE_SEMIDEFINITE = "psd"
    POSITIVE_DEFINITE = "pd"
    INDEFINITE = "indefinite"


def as_matrix(obj) -> np.ndarray:
    """Coerce an array or any wrapper exposing ``.matrix`` to a float array."""
    return np.asarray(getattr(obj, "matrix", obj), dtype=float)


def is_symmetric(M, sym_tol: float = DEFAULT_SYM_TOL) -> bool:
    """Check max|M - M^T| <= sym_tol * max(1, max|M|)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    if M.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(M))))
    return float(np.max(np.abs(M - M.T))) <= sym_tol * scale


def classify_definiteness(
    M,
    class_tol: float = DEFAULT_CLASS_TOL,
    sym_tol: float = DEFAULT_SYM_TOL,
) -> Definiteness:
    """Classify a symmetric matrix by eigenvalue thresholding.

    An eigenvalue counts as zero when |lambda| <= class_tol * max(1, ||M||_2).
    All eigenvalues above the threshold gives POSITIVE_DEFINITE, any below
    the negative threshold gives INDEFINITE, otherwise POSITIVE_SEMIDEFINITE.
    The exact zero matrix classifies as ZERO.

    Raises NotSymmetricError when M is not symmetric within sym_tol.
    """
    M = np.asarray(M, dtype=float)
    if not is_symmetric(M, sym_tol):
        raise NotSymmetricError(f"matrix is not symmetric within {sym_tol}")
    if not M.any():
        return Definiteness.ZERO
    eig = np.linalg.eigvalsh(M)
    cut = class_tol * max(1.0, float(np.max(np.abs(eig))))
    lo = float(eig[0])
    if lo < -cut:
        return Definiteness.INDEFINITE
    if lo > cut:
        return Definiteness.POSITIVE_DEFINITE
    return Definiteness.POSITIVE_SEMIDEFINITE


def numerical_rank(M, tol: float = DEFAULT_RANK_TOL) -> int:
    """Count singular values above tol * sigma_max (0 for the zero matrix)."""
    M = as_matrix(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^ambient_dim held as an orthonormal basis.

    ``gap`` is (smallest retained singular value) / (largest discarded one)
    at the rank decision that produced the basis; ``math.inf`` when nothing
    was discarded. Small gaps flag rank verdicts worth auditing.
    """

    basis: np.ndarray  # ambient_dim x dim, orthonormal columns
    ambient_dim: int
    tol: float = DEFAULT_RANK_TOL
    gap: float = math.inf

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def contains_vector(self, v, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise AmbientMismatchError("vector length does not match ambient dimension")
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            return True
        resid = v - self.basis @ (self.basis.T @ v)
        return float(np.linalg.norm(resid)) <= tol * math.sqrt(self.ambient_dim) * nrm


def orthonormal_basis(M, tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Orthonormal basis of the column space of M, via SVD truncation."""
    M = as_matrix(M)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    ambient = int(M.shape[0])
    if M.size == 0 or not M.any():
        return Subspace(np.zeros((ambient, 0)), ambient, tol)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.count_nonzero(s > tol * s[0]))
    if rank < s.size and s[rank] > 0.0:
        gap = float(s[rank - 1] / s[rank])
    else:
        gap = math.inf
    return Subspace(np.ascontiguousarray(U[:, :rank]), ambient, tol, gap)


def _check_same_ambient(U: Subspace, V: Subspace) -> None:
    if U.ambient_dim != V.ambient_dim:
        raise AmbientMismatchError(
            f"ambient dimensions differ: {U.ambient_dim} vs {V.ambient_dim}"
        )


def subspace_sum(U: Subspace, V: Subspace, tol: float | None = None) -> Subspace:
    """Orthonormal basis of span(U union V)."""
    _check_same_ambient(U, V)
    tol = max(U.tol, V.tol) if tol is None else tol
    return orthonormal_basis(np.hstack([U.basis, V.basis]), tol)


def subspace_contains(U: Subspace, V: Subspace, tol: float | None = None) -> bool:
    """True iff V is contained in U: ||(I - U U^T) V|| <= tol * sqrt(ambient)."""
    _check_same_ambient(U, V)
    tol = max(U.tol, V.tol) if tol is None else tol
    if V.dim == 0:
        return True
    resid = V.basis - U.basis @ (U.basis.T @ V.basis)
    return float(np.linalg.norm(resid)) <= tol * math.sqrt(U.ambient_dim)


def krylov_controllable_subspace(L, B, tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Smallest L-invariant subspace containing img(B) (the maximal Krylov
    subspace generated by L from img(B)).

    Equals the image of the controllability matrix
    [B, -LB, ..., (-L)^(dn-1) B]; sign alternation does not change the
    image. The returned subspace's ``gap`` is the smallest singular-value
    gap seen over all rank decisions, so borderline verdicts are
    auditable.

    For symmetric L (every block Laplacian is), the subspace is computed
    as the direct sum over eigenspaces of the projections of img(B):
    eigenvalues within tol * max(1, ||L||) of each other count as one
    eigenspace, and within each eigenspace the projected input's rank is
    decided by one SVD. This route is numerically stable because no rank
    decision ever feeds the next one. The textbook alternative, growing
    S_{k+1} = S_k + L S_k with re-orthonormalization until the dimension
    stabilizes, chains its rank decisions: directions kept near the
    tolerance carry rounding noise that the next multiplication by L
    amplifies by the spectral ratio of unreached to reached directions,
    and once that noise crosses the tolerance the dimension inflates.
    Systems with an exactly orthogonal eigenvector (hence provably
    deficient) get reported full-rank that way from sizes as small as
    dn = 12, so the iteration is kept only as the fallback for
    non-symmetric inputs, where eigenspace projection does not apply.
    """
    Lm = as_matrix(L)
    Bm = as_matrix(B)
    if Lm.ndim != 2 or Lm.shape[0] != Lm.shape[1]:
        raise DimensionMismatchError("dynamics matrix must be square")
    if Bm.ndim == 1:
        Bm = Bm.reshape(-1, 1)
    if Bm.shape[0] != Lm.shape[0]:
        raise DimensionMismatchError(
            f"input matrix has {Bm.shape[0]} rows, dynamics has {Lm.shape[0]}"
        )
    if is_symmetric(Lm):
        return _eigenspace_reachable(Lm, Bm, tol)
    return _iterated_reachable(Lm, Bm, tol)


def _eigenspace_reachable(Lm: np.ndarray, Bm: np.ndarray, tol: float) -> Subspace:
    """Sum of per-eigenspace projections of img(B), for symmetric L."""
    ambient = int(Lm.shape[0])
    if not Bm.any():
        return Subspace(np.zeros((ambient, 0)), ambient, tol)
    eigvals, eigvecs = np.linalg.eigh(Lm)
    cluster_tol = tol * max(1.0, float(np.max(np.abs(eigvals))))
    pieces = []
    gap = math.inf
    start = 0
    for stop in range(1, ambient + 1):
        if stop < ambient and eigvals[stop] - eigvals[stop - 1] <= cluster_tol:
            continue
        V = eigvecs[:, start:stop]
        M = V.T @ Bm
        U, s, _ = np.linalg.svd(M, full_matrices=False)
        cut = tol * max(1.0, float(s[0]) if s.size else 0.0)
        rank = int(np.count_nonzero(s > cut))
        if rank > 0:
            pieces.append(V @ U[:, :rank])
            if rank < s.size and s[rank] > 0.0:
                gap = min(gap, float(s[rank - 1] / s[rank]))
        elif s.size and s[0] > 0.0:
            gap = min(gap, cut / float(s[0]))
        start = stop
    if not pieces:
        return Subspace(np.zeros((ambient, 0)), ambient, tol, gap)
    return Subspace(np.hstack(pieces), ambient, tol, gap)


def _iterated_reachable(Lm: np.ndarray, Bm: np.ndarray, tol: float) -> Subspace:
    """Grow S_{k+1} = S_k + L S_k until the dimension stabilizes.

    Subject to noise amplification across steps on ill-conditioned
    reachability structures; see krylov_controllable_subspace.
    """
    ambient = int(Lm.shape[0])
    space = orthonormal_basis(Bm, tol)
    gap = space.gap
    for _ in range(ambient):
        if space.dim >= ambient:
            break
        grown = orthonormal_basis(np.hstack([space.basis, Lm @ space.basis]), tol)
        gap = min(gap, grown.gap)
        if grown.dim == space.dim:
            break
        space = grown
    return Subspace(space.basis, space.ambient_dim, tol, gap)
