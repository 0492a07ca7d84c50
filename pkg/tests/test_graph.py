"""Graph construction, Laplacian assembly, and path/metric queries."""

import numpy as np
import pytest

from conftest import bfs_all_distances, random_connected_graph, random_pd_weight
from mwnet import samples
from mwnet.graph import (
    AsymmetricWeightError,
    DisconnectedError,
    DuplicateEdgeError,
    IndefiniteWeightError,
    NotAPathError,
    SelfLoopError,
    UnreachableError,
    ZeroWeightError,
    adjacency_matrix,
    build_graph,
    degree_matrix,
    diameter,
    distance,
    graph_from_json,
    graph_to_json,
    has_pd_shortest_path,
    is_complete,
    is_connected,
    is_cycle_graph,
    is_path_graph,
    is_tree,
    laplacian,
    node_degree,
    path_weight_product,
    pd_shortest_path,
)
from mwnet.linalg import Definiteness, DimensionMismatchError, numerical_rank


class TestBuildGraph:
    def test_reference_path_all_pd(self):
        g = samples.path_network()
        assert g.n == 5 and g.d == 2 and g.num_edges == 4
        for i, j, w in g.edges():
            assert w.kind is Definiteness.POSITIVE_DEFINITE

    def test_rank_one_weight_classifies_psd(self):
        g = build_graph(2, 2, [(0, 1, [[1, 1], [1, 1]])])
        assert g.weight_kind(0, 1) is Definiteness.POSITIVE_SEMIDEFINITE

    def test_indefinite_weight_rejected(self):
        with pytest.raises(IndefiniteWeightError):
            build_graph(2, 2, [(0, 1, [[1, 0], [0, -1]])])

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            build_graph(2, 2, [(1, 1, np.eye(2))])

    def test_duplicate_edge_rejected(self):
        with pytest.raises(DuplicateEdgeError):
            build_graph(2, 2, [(0, 1, np.eye(2)), (1, 0, np.eye(2))])

    def test_wrong_shape_rejected(self):
        with pytest.raises(DimensionMismatchError):
            build_graph(2, 2, [(0, 1, np.eye(3))])

    def test_asymmetric_weight_rejected(self):
        with pytest.raises(AsymmetricWeightError):
            build_graph(2, 2, [(0, 1, [[1, 1], [0, 1]])])

    def test_zero_weight_rejected(self):
        with pytest.raises(ZeroWeightError):
            build_graph(2, 2, [(0, 1, np.zeros((2, 2)))])

    def test_symmetric_storage(self):
        g = samples.path_network()
        assert np.array_equal(g.weight(0, 1), g.weight(1, 0))


class TestDegreeAndLaplacian:
    def test_path_inner_node_degree(self):
        # node 2 sums its two incident weights
        g = samples.path_network()
        assert np.array_equal(node_degree(g, 2), np.array([[3, 1], [1, 4]]))

    def test_isolated_node_zero_degree(self):
        g = build_graph(3, 2, [(0, 1, np.eye(2))])
        assert not node_degree(g, 2).any()

    def test_single_edge_degree_blocks(self):
        W = np.array([[2.0, 1.0], [1.0, 3.0]])
        g = build_graph(2, 2, [(0, 1, W)])
        D = degree_matrix(g)
        assert np.array_equal(D[:2, :2], W) and np.array_equal(D[2:, 2:], W)

    def test_reference_laplacian_entry_for_entry(self):
        lap = laplacian(samples.path_network())
        assert np.array_equal(lap.matrix, samples.path_network_expected_laplacian())

    def test_edgeless_laplacian_is_zero(self):
        g = build_graph(3, 2, [])
        assert not laplacian(g).matrix.any()

    def test_two_node_laplacian_blocks(self):
        W = np.array([[1.0, 2.0], [2.0, 5.0]])
        g = build_graph(2, 2, [(0, 1, W)])
        L = laplacian(g).matrix
        assert np.array_equal(L, np.block([[W, -W], [-W, W]]))

    def test_block_row_sums_vanish_on_random_graphs(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            lap = laplacian(g)
            ones = np.tile(np.eye(d), (n, 1))
            assert np.max(np.abs(lap.matrix @ ones)) <= 1e-8 * max(1.0, np.max(np.abs(lap.matrix)))

    def test_spectrum_nonnegative_on_random_graphs(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            L = laplacian(g).matrix
            lo = np.linalg.eigvalsh(L)[0]
            assert lo >= -1e-8 * max(1.0, np.linalg.norm(L, 2))

    def test_relabeling_conjugates_laplacian(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 8))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            sigma = rng.permutation(n)
            relabeled = build_graph(
                n, d, [(sigma[i], sigma[j], w.entries) for i, j, w in g.edges()]
            )
            Ps = np.zeros((n, n))
            for i in range(n):
                Ps[sigma[i], i] = 1.0
            Pblk = np.kron(Ps, np.eye(d))
            assert np.array_equal(
                laplacian(relabeled).matrix, Pblk @ laplacian(g).matrix @ Pblk.T
            )


class TestMetricQueries:
    def test_path_end_to_end_distance(self):
        assert distance(samples.path_network(), 0, 4) == 4

    def test_distance_to_self_is_zero(self):
        assert distance(samples.two_cell_network(), 3, 3) == 0

    def test_two_cell_distance(self):
        assert distance(samples.two_cell_network(), 0, 2) == 2

    def test_unreachable_returns_none(self):
        g = build_graph(3, 1, [(0, 1, [[1.0]])])
        assert distance(g, 0, 2) is None

    def test_diameters(self):
        assert diameter(samples.path_network()) == 4
        k3 = build_graph(3, 1, [(0, 1, [[1.0]]), (1, 2, [[1.0]]), (0, 2, [[1.0]])])
        assert diameter(k3) == 1
        # farthest pair in the six-node network is (2, 5), three hops apart
        assert diameter(samples.two_cell_network()) == 3

    def test_diameter_raises_on_disconnected(self):
        g = build_graph(3, 1, [(0, 1, [[1.0]])])
        with pytest.raises(DisconnectedError):
            diameter(g)

    def test_connectivity(self):
        assert is_connected(samples.path_network())
        assert not is_connected(build_graph(2, 2, []))
        g2 = samples.two_cell_network()
        kept = [(i, j, w.entries) for i, j, w in g2.edges() if 2 not in (i, j)]
        assert not is_connected(build_graph(6, 2, kept))

    def test_distance_is_a_metric(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 9))
            g = random_connected_graph(rng, n, 1)
            ref = bfs_all_distances(g)
            for i in range(n):
                for j in range(n):
                    assert distance(g, i, j) == int(ref[i, j])
                    assert distance(g, i, j) == distance(g, j, i)
                    for k in range(n):
                        assert ref[i, j] <= ref[i, k] + ref[k, j]


class TestPdPaths:
    def test_all_pd_path(self):
        assert has_pd_shortest_path(samples.path_network(), 0, 4)

    def test_psd_edge_blocks_the_path(self):
        assert not has_pd_shortest_path(samples.path_network_psd_variant(), 0, 4)

    def test_trivial_self_path(self):
        assert has_pd_shortest_path(samples.path_network(), 2, 2)

    def test_unreachable_raises(self):
        g = build_graph(3, 1, [(0, 1, [[1.0]])])
        with pytest.raises(UnreachableError):
            has_pd_shortest_path(g, 0, 2)

    def test_witness_product_has_full_rank(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 8))
            d = int(rng.integers(1, 4))
            g = random_connected_graph(rng, n, d)
            i, j = rng.integers(0, n, size=2)
            path = pd_shortest_path(g, int(i), int(j))
            if path is None or len(path) < 2:
                continue
            assert numerical_rank(path_weight_product(g, path)) == d


class TestPathWeightProduct:
    def test_ordered_product_along_path(self):
        out = path_weight_product(samples.path_network(), [0, 1, 2])
        assert np.array_equal(out, np.array([[1, 2], [1, 4]]))

    def test_single_edge_product(self):
        g = samples.path_network()
        assert np.array_equal(path_weight_product(g, [0, 1]), g.weight(0, 1))

    def test_psd_factor_drops_rank(self):
        out = path_weight_product(samples.path_network_psd_variant(), [0, 1, 2])
        assert np.array_equal(out, np.array([[2, 2], [3, 3]]))
        assert numerical_rank(out) == 1

    def test_non_path_raises(self):
        with pytest.raises(NotAPathError):
            path_weight_product(samples.path_network(), [0, 2])


class TestStructurePredicates:
    def test_path_is_tree_and_path(self):
        g = samples.path_network()
        assert is_tree(g) and is_path_graph(g) and not is_cycle_graph(g) and not is_complete(g)

    def test_cycle_detection(self, rng):
        ring = build_graph(4, 1, [(i, (i + 1) % 4, [[1.0]]) for i in range(4)])
        assert is_cycle_graph(ring) and not is_tree(ring)

    def test_complete_detection(self):
        k3 = build_graph(3, 2, [(i, j, random_pd_weight(np.random.default_rng(1), 2))
                                for i in range(3) for j in range(i + 1, 3)])
        assert is_complete(k3)


class TestJsonSchema:
    def test_round_trip(self):
        g = samples.two_cell_network()
        doc = graph_to_json(g)
        g2 = graph_from_json(doc)
        assert graph_to_json(g2) == doc

    def test_shipped_files_match_builders(self):
        for name in samples.builtin_names():
            from_file = graph_from_json(samples.builtin_json(name))
            assert graph_to_json(from_file) == graph_to_json(samples.builtin_graph(name))

    def test_malformed_documents_rejected(self):
        from mwnet.graph import GraphError

        with pytest.raises(GraphError):
            graph_from_json({"n": 2, "edges": []})
        with pytest.raises(GraphError):
            graph_from_json({"n": 2, "d": 2, "edges": [{"i": 0, "j": 1}]})
        with pytest.raises(GraphError):
            graph_from_json([1, 2, 3])
