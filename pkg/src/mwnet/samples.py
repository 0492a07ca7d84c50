"""Built-in reference networks with known controllability behavior.

Two small networks exercise every capability of the package and double as
documentation of the graph JSON schema (the same graphs ship as data files
example1.json, example1_psd.json and example2.json):

* a five-node path with positive definite 2x2 weights that is controllable
  from an endpoint, plus a variant where one weight is weakened to a rank-1
  PSD matrix, which drops the controllable dimension from 10 to 9;
* a six-node network with a two-cell almost equitable partition whose cell
  sizes share the divisor 2, so it admits a provably uncontrollable
  three-node input (dimension 9 of 12).

All node indices here are 0-based; the drawings in most references label
the same nodes 1-based.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .graph import MatrixWeightedGraph, build_graph


def path_network() -> MatrixWeightedGraph:
    """Five-node path 0-1-2-3-4 with positive definite 2x2 weights."""
    return build_graph(
        5,
        2,
        [
            (0, 1, [[1, 1], [1, 2]]),
            (1, 2, [[1, 0], [0, 2]]),
            (2, 3, [[2, 1], [1, 2]]),
            (3, 4, [[1, 2], [2, 5]]),
        ],
    )


def path_network_psd_variant() -> MatrixWeightedGraph:
    """The same path with the (1, 2) weight replaced by a rank-1 PSD matrix."""
    return build_graph(
        5,
        2,
        [
            (0, 1, [[1, 1], [1, 2]]),
            (1, 2, [[1, 1], [1, 1]]),
            (2, 3, [[2, 1], [1, 2]]),
            (3, 4, [[1, 2], [2, 5]]),
        ],
    )


def path_network_expected_laplacian() -> np.ndarray:
    """The 10x10 block Laplacian of path_network, written out entry by entry."""
    return np.array(
        [
            [1, 1, -1, -1, 0, 0, 0, 0, 0, 0],
            [1, 2, -1, -2, 0, 0, 0, 0, 0, 0],
            [-1, -1, 2, 1, -1, 0, 0, 0, 0, 0],
            [-1, -2, 1, 4, 0, -2, 0, 0, 0, 0],
            [0, 0, -1, 0, 3, 1, -2, -1, 0, 0],
            [0, 0, 0, -2, 1, 4, -1, -2, 0, 0],
            [0, 0, 0, 0, -2, -1, 3, 3, -1, -2],
            [0, 0, 0, 0, -1, -2, 3, 7, -2, -5],
            [0, 0, 0, 0, 0, 0, -1, -2, 1, 2],
            [0, 0, 0, 0, 0, 0, -2, -5, 2, 5],
        ],
        dtype=float,
    )


def two_cell_network() -> MatrixWeightedGraph:
    """Six-node network carrying the almost equitable partition {0,1 | 2,3,4,5}.

    Every cross edge between the two cells is positive definite and every
    edge inside the big cell (plus the 0-1 edge) is the rank-1 PSD matrix.
    """
    pd = [[1, 1], [1, 2]]
    psd = [[1, 1], [1, 1]]
    return build_graph(
        6,
        2,
        [
            (0, 1, psd),
            (1, 2, pd),
            (2, 3, psd),
            (3, 4, psd),
            (0, 3, pd),
            (1, 4, pd),
            (4, 5, psd),
            (0, 5, pd),
        ],
    )


TWO_CELL_AEP = [[0, 1], [2, 3, 4, 5]]

_BUILTIN = {
    "example1": path_network,
    "example1_psd": path_network_psd_variant,
    "example2": two_cell_network,
}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN))


def builtin_graph(name: str) -> MatrixWeightedGraph:
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown builtin graph {name!r}; have {builtin_names()}") from None


def builtin_json(name: str) -> dict:
    """The shipped JSON document for a builtin graph."""
    if name not in _BUILTIN:
        raise KeyError(f"unknown builtin graph {name!r}; have {builtin_names()}")
    text = resources.files("mwnet.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def write_builtin_graphs(outdir) -> list[Path]:
    """Copy the bundled graph files into a directory; returns written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in builtin_names():
        target = outdir / f"{name}.json"
        target.write_text(json.dumps(builtin_json(name), indent=2, sort_keys=True) + "\n")
        written.append(target)
    return written


def self_check(tol: float = 1e-8) -> list[dict]:
    """Run the built-in networks end to end against their known results.

    Returns one record per check with name, expected, got and ok fields;
    the CLI 'examples' command prints these and fails on any mismatch.
    """
    from . import bounds, partition
    from .controllability import GeneralInputMatrix, is_controllable
    from .graph import laplacian

    checks: list[dict] = []

    def record(name, expected, got):
        checks.append({"name": name, "expected": expected, "got": got, "ok": expected == got})

    lap = laplacian(path_network()).matrix
    record(
        "path network Laplacian matches the reference matrix",
        True,
        bool(np.array_equal(lap, path_network_expected_laplacian())),
    )
    record(
        "path network controllable dimension from node 0",
        10,
        is_controllable(path_network(), [0], tol).dim,
    )
    record(
        "PSD-variant controllable dimension from node 0",
        9,
        is_controllable(path_network_psd_variant(), [0], tol).dim,
    )

    g2 = two_cell_network()
    pi = partition.make_partition(TWO_CELL_AEP)
    record("two-cell partition is almost equitable", True, bool(partition.is_almost_equitable(g2, pi)))
    record("two-cell partition gcd", 2, bounds.partition_gcd(pi))
    record(
        "input at nodes {0, 2, 5} meets the c=1 count condition",
        True,
        bounds.input_count_condition(pi, [0, 2, 5], 1),
    )
    B = GeneralInputMatrix.from_nodes(6, 2, [0, 2, 5])
    from .controllability import controllable_subspace

    record(
        "two-cell network dimension with the three-node input",
        9,
        controllable_subspace(laplacian(g2), B, tol).dim,
    )
    return checks
