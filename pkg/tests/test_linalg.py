"""Definiteness classification, numerical rank, and subspace arithmetic."""

import math

import numpy as np
import pytest

from conftest import controllability_matrix_rank, random_connected_graph
from mwnet import samples
from mwnet.controllability import GeneralInputMatrix, InputMatrix
from mwnet.graph import build_graph, laplacian
from mwnet.linalg import (
    AmbientMismatchError,
    Definiteness,
    DimensionMismatchError,
    NotSymmetricError,
    classify_definiteness,
    krylov_controllable_subspace,
    numerical_rank,
    orthonormal_basis,
    subspace_contains,
    subspace_sum,
)
from mwnet.partition import characteristic_matrix, make_partition


class TestClassify:
    def test_pd(self):
        assert classify_definiteness([[1, 1], [1, 2]]) is Definiteness.POSITIVE_DEFINITE

    def test_psd(self):
        assert classify_definiteness([[1, 1], [1, 1]]) is Definiteness.POSITIVE_SEMIDEFINITE

    def test_zero(self):
        assert classify_definiteness(np.zeros((2, 2))) is Definiteness.ZERO

    def test_indefinite(self):
        assert classify_definiteness([[1, 0], [0, -1]]) is Definiteness.INDEFINITE

    def test_not_symmetric_raises(self):
        with pytest.raises(NotSymmetricError):
            classify_definiteness([[1, 1], [0, 1]])

    def test_near_zero_eigenvalue_counts_as_zero(self):
        M = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-12]])
        assert classify_definiteness(M) is Definiteness.POSITIVE_SEMIDEFINITE

    def test_pd_has_full_rank_and_zero_has_none(self, rng):
        from conftest import random_pd_weight

        for _ in range(50):
            d = int(rng.integers(1, 5))
            W = random_pd_weight(rng, d)
            assert classify_definiteness(W) is Definiteness.POSITIVE_DEFINITE
            assert numerical_rank(W) == d
        assert numerical_rank(np.zeros((3, 3))) == 0


class TestNumericalRank:
    def test_reference_laplacian_rank(self):
        # independent oracle: count singular values directly
        L = laplacian(samples.path_network()).matrix
        sv = np.linalg.svd(L, compute_uv=False)
        assert int(np.sum(sv > 1e-8 * sv[0])) == 8
        assert numerical_rank(L) == 8

    def test_identity(self):
        assert numerical_rank(np.eye(4)) == 4

    def test_proportional_rows(self):
        assert numerical_rank([[2, 2], [3, 3]]) == 1

    def test_invariance_under_permutation_and_rotation(self, rng):
        for _ in range(50):
            m, k = int(rng.integers(2, 7)), int(rng.integers(1, 7))
            M = rng.integers(-3, 4, size=(m, k)).astype(float)
            r = numerical_rank(M)
            perm = rng.permutation(m)
            assert numerical_rank(M[perm]) == r
            Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
            assert numerical_rank(Q @ M) == r


class TestOrthonormalBasis:
    def test_duplicate_columns_collapse(self):
        e1 = np.array([[1.0], [0.0], [0.0]])
        sub = orthonormal_basis(np.hstack([e1, e1]))
        assert sub.dim == 1
        assert sub.contains_vector(e1.ravel())

    def test_zero_matrix_gives_trivial_subspace(self):
        sub = orthonormal_basis(np.zeros((4, 3)))
        assert sub.dim == 0 and sub.ambient_dim == 4

    def test_characteristic_image_dimension(self):
        P = characteristic_matrix(make_partition(samples.TWO_CELL_AEP), 2).matrix
        assert orthonormal_basis(P).dim == 4

    def test_basis_is_orthonormal(self, rng):
        for _ in range(30):
            M = rng.standard_normal((8, int(rng.integers(1, 10))))
            sub = orthonormal_basis(M)
            assert np.allclose(sub.basis.T @ sub.basis, np.eye(sub.dim), atol=1e-10)


class TestSubspaceArithmetic:
    def _axis(self, k, ambient=4):
        v = np.zeros((ambient, 1))
        v[k] = 1.0
        return orthonormal_basis(v)

    def test_sum_of_axes(self):
        assert subspace_sum(self._axis(0), self._axis(1)).dim == 2

    def test_sum_idempotent(self):
        u = self._axis(2)
        assert subspace_sum(u, u).dim == 1

    def test_sum_of_oblique_spans(self):
        e1 = np.array([[1.0], [0.0]])
        e12 = np.array([[1.0], [1.0]])
        assert subspace_sum(orthonormal_basis(e1), orthonormal_basis(e12)).dim == 2

    def test_sum_commutative_and_associative(self, rng):
        for _ in range(30):
            subs = [orthonormal_basis(rng.standard_normal((6, int(rng.integers(1, 4)))))
                    for _ in range(3)]
            a, b, c = subs
            ab = subspace_sum(a, b)
            ba = subspace_sum(b, a)
            assert ab.dim == ba.dim
            assert subspace_contains(ab, ba) and subspace_contains(ba, ab)
            left = subspace_sum(subspace_sum(a, b), c)
            right = subspace_sum(a, subspace_sum(b, c))
            assert left.dim == right.dim
            assert subspace_contains(left, right) and subspace_contains(right, left)

    def test_ambient_mismatch_raises(self):
        u = orthonormal_basis(np.eye(3))
        v = orthonormal_basis(np.eye(4))
        with pytest.raises(AmbientMismatchError):
            subspace_sum(u, v)

    def test_whole_space_contains_everything(self, rng):
        whole = orthonormal_basis(np.eye(5))
        v = orthonormal_basis(rng.standard_normal((5, 2)))
        assert subspace_contains(whole, v)

    def test_disjoint_axes_not_contained(self):
        assert not subspace_contains(self._axis(0), self._axis(1))


class TestKrylovSubspace:
    def test_reference_dimensions(self):
        lap = laplacian(samples.path_network())
        B = InputMatrix((0,), 5, 2)
        assert krylov_controllable_subspace(lap, B).dim == 10
        lap_psd = laplacian(samples.path_network_psd_variant())
        assert krylov_controllable_subspace(lap_psd, B).dim == 9

    def test_zero_dynamics_fixes_input_image(self):
        B = GeneralInputMatrix.from_nodes(3, 2, [0, 2])
        sub = krylov_controllable_subspace(np.zeros((6, 6)), B)
        assert sub.dim == numerical_rank(B.matrix)
        assert subspace_contains(sub, orthonormal_basis(B.matrix))

    def test_dimension_mismatch_raises(self):
        with pytest.raises(DimensionMismatchError):
            krylov_controllable_subspace(np.zeros((4, 4)), np.zeros((6, 2)))
        with pytest.raises(DimensionMismatchError):
            krylov_controllable_subspace(np.zeros((4, 3)), np.zeros((4, 2)))

    def test_matches_explicit_controllability_matrix(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            lap = laplacian(g)
            m = int(rng.integers(1, n + 1))
            leaders = tuple(int(v) for v in rng.choice(n, size=m, replace=False))
            B = InputMatrix(leaders, n, d)
            assert krylov_controllable_subspace(lap, B).dim == controllability_matrix_rank(lap, B)

    def test_iteration_dimensions_nondecreasing(self, rng):
        # replay the iteration through public subspace ops
        for _ in range(20):
            n = int(rng.integers(2, 6))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            L = laplacian(g).matrix
            B = InputMatrix((0,), n, d)
            space = orthonormal_basis(B.matrix)
            dims = [space.dim]
            for _ in range(n * d):
                space = subspace_sum(space, orthonormal_basis(L @ space.basis))
                dims.append(space.dim)
            assert all(b >= a for a, b in zip(dims, dims[1:]))
            stable = dims.index(dims[-1])
            # strictly increasing until the fixed point, constant afterwards
            assert all(b > a for a, b in zip(dims[:stable], dims[1:stable + 1]))
            assert krylov_controllable_subspace(L, B.matrix).dim == dims[-1]

    def test_containment_of_reference_subspaces(self):
        # the deficient pair's subspace is not inside the 4-dim characteristic
        # image, the cell-constant pair's subspace is
        g = samples.two_cell_network()
        lap = laplacian(g)
        char = orthonormal_basis(characteristic_matrix(make_partition(samples.TWO_CELL_AEP), 2).matrix)
        wide = krylov_controllable_subspace(lap, GeneralInputMatrix.from_nodes(6, 2, [0, 2, 5]))
        assert wide.dim == 9 and not subspace_contains(char, wide)
        narrow = krylov_controllable_subspace(lap, GeneralInputMatrix.from_nodes(6, 2, [0, 1]))
        assert subspace_contains(char, narrow)
