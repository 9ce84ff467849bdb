"""``opk`` command line: solve, kernelize, verify, gen, check, stats."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from opk import _core
from opk.config import BudgetExceeded, get_budget
from opk.gadgets import lift_c3_edge_membership, lift_p3_membership, star_overlap_gadget
from opk.generators import random_graph, random_set_instance, stream
from opk.harness import ALL_SUITES, CheckOptions, format_report, run_check
from opk.model import (
    GRAPH_VARIANTS,
    MEMBERSHIP,
    OVERLAP,
    P2_MEMBERSHIP,
    VERTEX_MEMBERSHIP,
    VERTEX_OVERLAP,
    EDGE_MEMBERSHIP,
    Graph,
    GraphFamily,
    GraphInstance,
    InstanceError,
    SetInstance,
    complete_graph,
    cycle_graph,
    graph_solution_violation,
    instance_from_json,
    path_graph,
    set_solution_violation,
    solution_from_json,
    star_graph,
)
from opk.oracle import solve_graph_exact, solve_set_exact
from opk.overlap import overlap_bound
from opk.p2 import solve_p2_membership
from opk.pipeline import kernelize
from opk.subgraphs import dedupe_by_vertex_set, derive_collections, enumerate_subgraphs

EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3


class ParseFailure(Exception):
    pass


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from exc


def _load_instance(path: str) -> SetInstance | GraphInstance:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise ParseFailure(f"{path}: top-level JSON value must be an object")
    try:
        return instance_from_json(doc)
    except InstanceError as exc:
        raise ParseFailure(f"{path}: {exc}") from exc


def _emit(doc: Any, path: str | None = None) -> None:
    text = json.dumps(doc, ensure_ascii=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


_FAMILY_RE = re.compile(r"^([KPCS])(\d+)$")


def parse_family(spec: str) -> GraphFamily:
    """Comma-separated names such as ``K3``, ``P3``, ``C4``, ``S3`` (star with 3 leaves)."""
    members = []
    for name in spec.split(","):
        m = _FAMILY_RE.match(name.strip().upper())
        if not m:
            raise ParseFailure(f"unknown family member {name!r}")
        kind, size = m.group(1), int(m.group(2))
        build = {"K": complete_graph, "P": path_graph, "C": cycle_graph, "S": star_graph}[kind]
        if kind == "C" and size < 3:
            raise ParseFailure("cycles need at least 3 vertices")
        members.append(build(size))
    return GraphFamily(tuple(members))


# ---------------------------------------------------------------- commands


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.input)
    if isinstance(inst, GraphInstance) and inst.variant == P2_MEMBERSHIP:
        sol = solve_p2_membership(inst.g, inst.t, inst.k)
    elif isinstance(inst, GraphInstance):
        sol = solve_graph_exact(inst, get_budget())
    else:
        sol = solve_set_exact(inst, get_budget())
    _emit({"decision": "yes" if sol is not None else "no",
           "witness": None if sol is None else sol.to_json()})
    return 0


def cmd_kernelize(args: argparse.Namespace) -> int:
    inst = _load_instance(args.input)
    out = kernelize(inst, get_budget())
    if out.early_solution is not None:
        _emit({"early_solution": out.early_solution.to_json()}, args.output)
    elif out.graph is not None:
        _emit(out.graph.to_json(), args.output)
    else:
        _emit(out.reduced.to_json(), args.output)
    if args.trace:
        doc = out.trace.to_json()
        doc["early_solution"] = None if out.early_solution is None else out.early_solution.to_json()
        _emit(doc, args.trace)
    if args.stats:
        _emit(out.stats.to_json(), args.stats)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    doc = _read_json(args.solution)
    if not isinstance(doc, dict):
        raise ParseFailure(f"{args.solution}: top-level JSON value must be an object")
    try:
        sol = solution_from_json(doc)
    except InstanceError as exc:
        raise ParseFailure(f"{args.solution}: {exc}") from exc
    if isinstance(inst, SetInstance):
        problem = set_solution_violation(inst, sol)
    else:
        problem = graph_solution_violation(inst, sol)
    if problem is None:
        print("valid")
        return 0
    print(f"invalid: {problem}")
    return EXIT_INVALID


def _base_graph(args: argparse.Namespace, rng) -> Graph:
    if args.input:
        inst = _load_instance(args.input)
        if not isinstance(inst, GraphInstance):
            raise ParseFailure("gadget input must be a graph instance")
        return inst.g
    n = args.n if args.n is not None else int(rng.integers(3, 6))
    return random_graph(rng, n, args.p)


def cmd_gen(args: argparse.Namespace) -> int:
    rng = stream(args.seed)
    kind = args.kind
    provenance = None
    if kind == "random-set":
        doc = random_set_instance(rng, args.mode, args.max_n, args.max_sets).to_json()
    elif kind == "random-graph":
        n = args.n if args.n is not None else int(rng.integers(4, 10))
        g = random_graph(rng, n, args.p)
        family = parse_family(args.family)
        t = args.t if args.t is not None else (1 if args.variant.endswith("membership") else 0)
        doc = GraphInstance(g, family, t, args.k, args.variant).to_json()
    elif kind in ("p3-lift", "c3-lift"):
        g = _base_graph(args, rng)
        t = args.t if args.t is not None else 1
        if kind == "p3-lift":
            lift = lift_p3_membership(g, args.k, t)
            fam, variant = GraphFamily((path_graph(3),)), VERTEX_MEMBERSHIP
        else:
            lift = lift_c3_edge_membership(g, args.k, t)
            fam, variant = GraphFamily((complete_graph(3),)), EDGE_MEMBERSHIP
        doc = GraphInstance(lift.graph, fam, t + 1, lift.k, variant).to_json()
        provenance = lift.provenance
    elif kind == "star-overlap":
        g = _base_graph(args, rng)
        t = args.t if args.t is not None else 0
        gad = star_overlap_gadget(g, t)
        doc = GraphInstance(gad.graph, GraphFamily((gad.pattern,)), t, args.k,
                            VERTEX_OVERLAP).to_json()
        provenance = gad.provenance
    else:
        raise ParseFailure(f"unknown generator {kind!r}")
    _emit(doc, args.output)
    if args.provenance and provenance is not None:
        _emit([list(p) if isinstance(p, tuple) else p for p in provenance], args.provenance)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    suites = tuple(s.strip() for s in args.variants.split(",") if s.strip())
    if suites == ("all",):
        suites = ALL_SUITES
    unknown = [s for s in suites if s not in ALL_SUITES]
    if unknown:
        raise ParseFailure(f"unknown check suites {unknown}; choose from {', '.join(ALL_SUITES)}")
    opts = CheckOptions(args.trials, args.seed, args.max_n, args.max_sets, suites)
    start = time.perf_counter()
    results = run_check(opts, get_budget())
    report = format_report(opts, results)
    sys.stdout.write(report)
    print(f"[{len(results)} trials in {time.perf_counter() - start:.2f}s, "
          f"search backend {_core.BACKEND}]", file=sys.stderr)
    return 0 if all(r.ok for r in results) else 1


def cmd_stats(args: argparse.Namespace) -> int:
    inst = _load_instance(args.input)
    if isinstance(inst, SetInstance):
        doc: dict[str, Any] = {
            "kind": "set", "mode": inst.mode, "n": inst.n, "sets": len(inst.sets),
            "r": inst.r, "t": inst.t, "k": inst.k,
        }
        if inst.mode == OVERLAP:
            doc["bound"] = overlap_bound(inst.r, inst.t, inst.k)
    else:
        family = inst.family
        if inst.variant == P2_MEMBERSHIP:
            family = GraphFamily((complete_graph(2),))
        cat = enumerate_subgraphs(inst.g, family, inst.induced, get_budget())
        coll_e, coll_v = derive_collections(cat)
        doc = {
            "kind": "graph", "variant": inst.variant, "n": inst.g.n, "m": inst.g.m,
            "t": inst.t, "k": inst.k, "r_H": family.r_h, "m_H": family.m_h,
            "catalog": len(cat), "deduped": len(dedupe_by_vertex_set(cat)),
            "edge_sets": len(coll_e), "vertex_sets": len(coll_v),
        }
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance exactly and print a witness")
    p.add_argument("input")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="reduce an instance to a kernel")
    p.add_argument("input")
    p.add_argument("output", nargs="?", default=None)
    p.add_argument("--trace", metavar="FILE", help="write the reduction trace as JSON")
    p.add_argument("--stats", metavar="FILE", help="write kernel statistics as JSON")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("verify", help="validate a solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument("kind", choices=["p3-lift", "c3-lift", "star-overlap", "random-set", "random-graph"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", help="graph instance to lift instead of a random graph")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mode", choices=[OVERLAP, MEMBERSHIP], default=OVERLAP)
    p.add_argument("--variant", choices=list(GRAPH_VARIANTS) + [P2_MEMBERSHIP], default=VERTEX_OVERLAP)
    p.add_argument("--family", default="K3")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--max-sets", type=int, default=20)
    p.add_argument("--provenance", metavar="FILE", help="write the new-vertex provenance map")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run randomized kernel soundness trials")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--max-sets", type=int, default=20)
    p.add_argument("--variants", default="set-overlap",
                   help=f"comma-separated suites or 'all': {', '.join(ALL_SUITES)}")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("stats", help="report instance and catalog sizes")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        # malformed OPK_BUDGET and similar configuration mistakes
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
