"""Shared fixtures: random graph generators and independent test oracles.

All generators draw integer-valued weights so that subspace dimensions are
crisp: rank decisions sit far from the tolerance and sweeps are exactly
reproducible. Oracles here never call the code paths they check.
"""

from __future__ import annotations

import numpy as np
import pytest

from mwnet.graph import build_graph
from mwnet.partition import make_partition


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_pd_weight(rng, d):
    """Integer positive definite d x d matrix."""
    X = rng.integers(-2, 3, size=(d, d)).astype(float)
    return X @ X.T + np.eye(d)


def random_psd_weight(rng, d):
    """Integer PSD d x d matrix of random rank 1..d (never the zero matrix)."""
    r = int(rng.integers(1, d + 1))
    while True:
        X = rng.integers(-2, 3, size=(d, r)).astype(float)
        W = X @ X.T
        if W.any():
            return W


def random_weight(rng, d):
    return random_pd_weight(rng, d) if rng.random() < 0.5 else random_psd_weight(rng, d)


def random_connected_graph(rng, n, d, extra=0.3, weight_fn=random_weight):
    """Random spanning tree plus extra edges, all weights PSD or PD."""
    edges = {}
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges[(j, i)] = weight_fn(rng, d)
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra:
                edges[(i, j)] = weight_fn(rng, d)
    return build_graph(n, d, [(i, j, w) for (i, j), w in edges.items()])


def random_tree(rng, n, d, weight_fn=random_pd_weight):
    return random_connected_graph(rng, n, d, extra=0.0, weight_fn=weight_fn)


def random_cycle(rng, n, d, weight_fn=random_pd_weight):
    edges = [(i, (i + 1) % n, weight_fn(rng, d)) for i in range(n)]
    return build_graph(n, d, edges)


def random_complete(rng, n, d, weight_fn=random_pd_weight):
    edges = [(i, j, weight_fn(rng, d)) for i in range(n) for j in range(i + 1, n)]
    return build_graph(n, d, edges)


def random_partition(rng, n):
    """Uniformly scrambled partition of {0..n-1} into 1..n cells."""
    perm = list(rng.permutation(n))
    s = int(rng.integers(1, n + 1))
    cuts = sorted(rng.choice(np.arange(1, n), size=s - 1, replace=False)) if s > 1 else []
    cells = []
    start = 0
    for cut in [*cuts, n]:
        cells.append(perm[start:cut])
        start = cut
    return make_partition(cells)


def aep_blowup_graph(rng, sizes, d, within=0.4, cross_extra=0.3):
    """A graph with a built-in almost equitable partition.

    Cells are consecutive index ranges of the given sizes. Adjacent cells
    (a random connected cell skeleton) are joined completely with one
    shared weight per cell pair, which equalizes every member's relative
    degree; edges inside a cell carry independent random weights and do
    not affect the AEP condition.

    Returns (graph, partition).
    """
    sizes = list(sizes)
    s = len(sizes)
    starts = np.cumsum([0] + sizes[:-1])
    cells = [list(range(starts[k], starts[k] + sizes[k])) for k in range(s)]
    pairs = set()
    for k in range(1, s):
        pairs.add((int(rng.integers(0, k)), k))
    for a in range(s):
        for b in range(a + 1, s):
            if (a, b) not in pairs and rng.random() < cross_extra:
                pairs.add((a, b))
    edges = []
    for a, b in pairs:
        W = random_weight(rng, d)
        for u in cells[a]:
            for v in cells[b]:
                edges.append((u, v, W))
    for cell in cells:
        for x in range(len(cell)):
            for y in range(x + 1, len(cell)):
                if rng.random() < within:
                    edges.append((cell[x], cell[y], random_weight(rng, d)))
    n = sum(sizes)
    return build_graph(n, d, edges), make_partition(cells)


def controllability_matrix_rank(L, B, tol=1e-8):
    """Rank of the explicitly assembled [B, -LB, L^2 B, ..., (-L)^(dn-1) B].

    Each power block is rescaled to unit norm before assembly; scaling a
    block by a positive number leaves the column space unchanged but keeps
    the singular spectrum of the stacked matrix honest despite L^(dn-1).
    """
    Lm = np.asarray(getattr(L, "matrix", L), dtype=float)
    Bm = np.asarray(getattr(B, "matrix", B), dtype=float)
    if Bm.ndim == 1:
        Bm = Bm.reshape(-1, 1)
    dn = Lm.shape[0]
    blocks = []
    blk = Bm.copy()
    for _ in range(dn):
        nrm = np.linalg.norm(blk)
        if nrm > 0:
            blk = blk / nrm
        blocks.append(blk)
        blk = -(Lm @ blk)
    K = np.hstack(blocks)
    sv = np.linalg.svd(K, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def bfs_all_distances(g):
    """Floyd-Warshall hop distances, independent of the package's BFS."""
    n = g.n
    INF = float("inf")
    dist = np.full((n, n), INF)
    np.fill_diagonal(dist, 0.0)
    for i, j, _ in g.edges():
        dist[i, j] = dist[j, i] = 1.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i, k] + dist[k, j] < dist[i, j]:
                    dist[i, j] = dist[i, k] + dist[k, j]
    return dist
