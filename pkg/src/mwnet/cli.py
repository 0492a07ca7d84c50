"""Command-line front end: graph ingestion, analysis, and report emission.

Commands:
    analyze          controllability report for one or more graph files
    partition        distance | aep-check | aep-refine | quotient
    uncontrollable-b construct and verify an uncontrollable input matrix
    examples         run the built-in reference networks end to end

Exit codes are a stable contract: 0 for success (analyze: controllable,
aep-check: partition is an AEP), 1 for a negative verdict (analyze:
uncontrollable, aep-check: not an AEP, examples: some check failed), and
2 for input errors (unreadable files, malformed graphs, bad indices).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from . import bounds, linalg, partition as partmod, samples
from .controllability import is_controllable
from .graph import GraphError, graph_from_json
from .partition import PartitionError


class OutputFormat(Enum):
    JSON = "json"
    TEXT = "text"
    DOT = "dot"


@dataclass(frozen=True)
class AnalysisConfig:
    """Tolerances and output format shared by all commands."""

    tol: float = linalg.DEFAULT_RANK_TOL
    class_tol: float = linalg.DEFAULT_CLASS_TOL
    aep_tol: float | None = None
    output: OutputFormat = OutputFormat.TEXT
    jobs: int = 1

    def __post_init__(self):
        if self.tol <= 0 or self.class_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.aep_tol is not None and self.aep_tol <= 0:
            raise ValueError("tolerances must be positive")


def _config_from_args(args) -> AnalysisConfig:
    return AnalysisConfig(
        tol=args.tol,
        class_tol=args.class_tol,
        aep_tol=args.aep_tol,
        output=OutputFormat(args.output),
        jobs=getattr(args, "jobs", 1),
    )


def _load_graph(path: str, config: AnalysisConfig):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path} is not valid JSON: {exc}") from None
    return graph_from_json(doc, class_tol=config.class_tol)


def _parse_cells(text: str) -> partmod.NodePartition:
    try:
        cells = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PartitionError(f"--cells is not valid JSON: {exc}") from None
    if not isinstance(cells, list) or not all(isinstance(c, list) for c in cells):
        raise PartitionError("--cells must be a JSON list of node-id lists")
    return partmod.make_partition(cells)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _one_based(nodes) -> str:
    return "{" + ", ".join(str(v + 1) for v in nodes) + "}"


def _report_text(path: str, report) -> str:
    lines = [
        f"{path}: dim {report.dim}/{report.total}, "
        + ("controllable" if report.controllable else "uncontrollable")
    ]
    lines.append(
        f"  leaders (0-based): {list(report.leaders)}  "
        f"(1-based: {_one_based(report.leaders)})"
    )
    if not math.isinf(report.gap):
        lines.append(f"  singular value gap at the rank cut: {report.gap:.3e}")
    for cert in report.certificates:
        rel = ">=" if cert.direction == "lower" else "<="
        lines.append(f"  certificate {cert.kind.value}: dim {rel} {cert.value}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    config = _config_from_args(args)

    def analyze_one(path: str):
        g = _load_graph(path, config)
        leaders = list(args.leaders)
        for v in leaders:
            if not (0 <= v < g.n):
                raise GraphError(f"{path}: leader index {v} out of range 0..{g.n - 1}")
        report = is_controllable(g, leaders, config.tol)
        certs = bounds.applicable_certificates(g, leaders, config.tol, config.aep_tol)
        return replace(report, certificates=certs)

    paths = list(args.graphs)
    if config.jobs > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(analyze_one, paths))
    else:
        reports = [analyze_one(p) for p in paths]

    if config.output is OutputFormat.JSON:
        docs = [{"graph": p, **r.to_dict()} for p, r in zip(paths, reports)]
        print(_dump_json(docs[0] if len(docs) == 1 else docs))
    else:
        for p, r in zip(paths, reports):
            print(_report_text(p, r))
    return 0 if all(r.controllable for r in reports) else 1


def cmd_partition(args) -> int:
    config = _config_from_args(args)
    g = _load_graph(args.graph, config)

    if args.mode == "distance":
        if not (0 <= args.leader < g.n):
            raise GraphError(f"leader index {args.leader} out of range 0..{g.n - 1}")
        pi = partmod.distance_partition(g, args.leader)
        if config.output is OutputFormat.JSON:
            print(_dump_json(pi.to_json()))
        else:
            print(f"distance partition from node {args.leader} (1-based {args.leader + 1}):")
            for r, cell in enumerate(pi.cells):
                print(f"  radius {r}: {list(cell)}  (1-based {_one_based(cell)})")
        return 0

    pi = _parse_cells(args.cells)
    if pi.n != g.n:
        raise PartitionError(f"cells cover {pi.n} nodes, graph has {g.n}")

    if args.mode == "aep-check":
        check = partmod.is_almost_equitable(g, pi, config.aep_tol)
        if config.output is OutputFormat.JSON:
            doc = {"is_aep": check.holds}
            if check.violation is not None:
                v = check.violation
                doc["violation"] = {
                    "cell_i": v.cell_i,
                    "cell_j": v.cell_j,
                    "node_v": v.node_v,
                    "node_w": v.node_w,
                    "deviation": v.deviation,
                }
            print(_dump_json(doc))
        elif check.holds:
            print("true: the partition is almost equitable")
        else:
            v = check.violation
            print(
                f"false: nodes {v.node_v} and {v.node_w} (1-based {v.node_v + 1}, "
                f"{v.node_w + 1}) of cell {v.cell_i} have relative degrees toward "
                f"cell {v.cell_j} differing by {v.deviation:g}"
            )
        return 0 if check.holds else 1

    if args.mode == "aep-refine":
        refined = partmod.coarsest_aep_refinement(g, pi, config.aep_tol)
        if config.output is OutputFormat.JSON:
            print(_dump_json(refined.to_json()))
        else:
            print(f"coarsest almost equitable refinement ({refined.s} cells):")
            for cell in refined.cells:
                print(f"  {list(cell)}  (1-based {_one_based(cell)})")
        return 0

    # quotient
    q = partmod.quotient(g, pi, config.aep_tol, config.class_tol)
    if config.output is OutputFormat.DOT:
        print(q.to_dot())
    elif config.output is OutputFormat.JSON:
        print(
            _dump_json(
                {
                    "cells": [list(c) for c in pi.cells],
                    "edges": [
                        {"i": i, "j": j, "w": [[float(x) for x in row] for row in w]}
                        for i, j, w in q.edges()
                    ],
                    "laplacian": [[float(x) for x in row] for row in q.laplacian],
                }
            )
        )
    else:
        print(f"quotient over {pi.s} cells (directed):")
        for i, j, w in q.edges():
            print(f"  cell {i} -> cell {j}: {w.tolist()}")
    return 0


def cmd_uncontrollable_b(args) -> int:
    config = _config_from_args(args)
    g = _load_graph(args.graph, config)
    pi = _parse_cells(args.cells)
    if pi.n != g.n:
        raise PartitionError(f"cells cover {pi.n} nodes, graph has {g.n}")
    B, cert = bounds.uncontrollable_input_certificate(
        g, pi, args.c, args.leaders, config.tol, config.aep_tol
    )
    dim = cert.hypothesis["exact_dim"]
    dn = g.n * g.d
    if config.output is OutputFormat.JSON:
        print(_dump_json({"input_nodes": list(B.nodes), **cert.to_dict()}))
    else:
        print(
            f"input with identity blocks at nodes {list(B.nodes)} "
            f"(1-based {_one_based(B.nodes)})"
        )
        print(f"  gcd {cert.hypothesis['gcd']}, q {cert.hypothesis['q']}, c {cert.hypothesis['c']}")
        print(f"  bound: dim <= {cert.value};  exact dim {dim} of {dn}")
        print("  uncontrollable: " + ("yes" if dim < dn else "NO (unexpected)"))
    return 0 if dim < dn else 1


def cmd_examples(args) -> int:
    if getattr(args, "dump", None):
        written = samples.write_builtin_graphs(args.dump)
        for p in written:
            print(f"wrote {p}")
    checks = samples.self_check(args.tol)
    ok = all(c["ok"] for c in checks)
    if args.json:
        print(_dump_json({"ok": ok, "checks": checks}))
    else:
        for c in checks:
            status = "ok " if c["ok"] else "FAIL"
            print(f"[{status}] {c['name']}: expected {c['expected']}, got {c['got']}")
    return 0 if ok else 1


def _add_common(p: argparse.ArgumentParser, jobs: bool = False) -> None:
    p.add_argument("--tol", type=float, default=linalg.DEFAULT_RANK_TOL,
                   help="relative rank / containment tolerance")
    p.add_argument("--class-tol", dest="class_tol", type=float,
                   default=linalg.DEFAULT_CLASS_TOL,
                   help="relative tolerance for definiteness classification")
    p.add_argument("--aep-tol", dest="aep_tol", type=float, default=None,
                   help="absolute tolerance for AEP degree comparisons "
                        "(default: 1e-9 relative to the largest weight entry)")
    p.add_argument("--output", choices=[f.value for f in OutputFormat],
                   default="text", help="report format")
    if jobs:
        p.add_argument("--jobs", type=int, default=1,
                       help="analyze this many graphs concurrently")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwnet",
        description="Controllability analysis of consensus dynamics on "
                    "matrix-weighted networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="controllability report for graph files")
    p.add_argument("graphs", nargs="+", help="graph JSON files")
    p.add_argument("--leaders", type=int, nargs="+", required=True,
                   help="0-based leader node indices")
    _add_common(p, jobs=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("partition", help="distance partitions, AEP checks, quotients")
    mode = p.add_subparsers(dest="mode", required=True)
    pd = mode.add_parser("distance", help="distance partition from a leader")
    pd.add_argument("graph")
    pd.add_argument("--leader", type=int, required=True)
    _add_common(pd)
    pd.set_defaults(func=cmd_partition)
    for name, hlp in [
        ("aep-check", "check whether the cells form an almost equitable partition"),
        ("aep-refine", "coarsest almost equitable refinement of the cells"),
        ("quotient", "quotient graph over an almost equitable partition"),
    ]:
        pm = mode.add_parser(name, help=hlp)
        pm.add_argument("graph")
        pm.add_argument("--cells", required=True,
                        help='JSON list of cells, e.g. "[[0,1],[2,3,4,5]]"')
        _add_common(pm)
        pm.set_defaults(func=cmd_partition)

    p = sub.add_parser("uncontrollable-b",
                       help="construct a provably uncontrollable input matrix")
    p.add_argument("graph")
    p.add_argument("--cells", required=True,
                   help="JSON list of cells forming an almost equitable partition")
    p.add_argument("--c", type=int, default=1,
                   help="per-cell multiplier, 1 <= c <= gcd(cell sizes) - 1")
    p.add_argument("--leaders", type=int, nargs="+", default=None,
                   help="explicit 0-based node choice overriding the lowest-index rule")
    _add_common(p)
    p.set_defaults(func=cmd_uncontrollable_b)

    p = sub.add_parser("examples", help="run the built-in reference networks")
    p.add_argument("--json", action="store_true", help="machine-readable pass/fail list")
    p.add_argument("--dump", default=None, metavar="DIR",
                   help="also write the bundled graph files into DIR")
    p.add_argument("--tol", type=float, default=linalg.DEFAULT_RANK_TOL)
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    # Every domain error (GraphError, PartitionError, structure and range
    # errors, ...) derives from ValueError; they all map to exit code 2.
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
