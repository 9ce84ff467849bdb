"""Randomized soundness trials behind ``opk check``.

Every trial draws from its own Philox stream keyed by (seed, suite, trial),
so a report depends only on the arguments. Reports contain no timings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from opk.config import Budget, BudgetExceeded, get_budget
from opk.gadgets import lift_c3_edge_membership, lift_p3_membership, star_overlap_gadget
from opk.generators import random_graph, random_set_instance, stream
from opk.membership import membership_bound
from opk.model import (
    CLIQUE_EDGE_OVERLAP,
    EDGE_MEMBERSHIP,
    GRAPH_VARIANTS,
    MEMBERSHIP,
    MEMBERSHIP_VARIANTS,
    OVERLAP,
    VERTEX_MEMBERSHIP,
    VERTEX_OVERLAP,
    Graph,
    GraphFamily,
    GraphInstance,
    SetInstance,
    complete_graph,
    cycle_graph,
    graph_solution_violation,
    path_graph,
    set_solution_violation,
)
from opk.oracle import decide
from opk.overlap import clique_overlap_bound
from opk.p2 import build_gadget, solve_degree_constrained, solve_p2_membership
from opk.pipeline import kernelize, reduced_instance

SET_SUITES = ("set-overlap", "set-membership")
GADGET_SUITES = ("p3-lift", "c3-lift", "star-overlap", "p2")
ALL_SUITES = SET_SUITES + GRAPH_VARIANTS + GADGET_SUITES

FAMILIES: dict[str, GraphFamily] = {
    "K3": GraphFamily((complete_graph(3),)),
    "P3": GraphFamily((path_graph(3),)),
    "C4,K4": GraphFamily((cycle_graph(4), complete_graph(4))),
}
CLIQUE_FAMILIES: dict[str, GraphFamily] = {
    "K3": GraphFamily((complete_graph(3),)),
    "K3,K4": GraphFamily((complete_graph(3), complete_graph(4))),
}


@dataclass(frozen=True)
class TrialResult:
    suite: str
    trial: int
    ok: bool
    early: bool
    message: str = ""


@dataclass(frozen=True)
class CheckOptions:
    trials: int = 100
    seed: int = 0
    max_n: int = 12
    max_sets: int = 20
    suites: tuple[str, ...] = ("set-overlap",)


def _int(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _set_trial(inst: SetInstance, budget: Budget) -> tuple[bool, bool, str]:
    out = kernelize(inst, budget)
    if out.early_solution is not None:
        problem = set_solution_violation(inst, out.early_solution)
        if problem is None and len(out.early_solution) != inst.k:
            problem = f"early solution has {len(out.early_solution)} sets, expected {inst.k}"
        return problem is None, True, problem or ""
    red = out.reduced
    if decide(inst, budget) != decide(red, budget):
        return False, False, "decision changed by kernelization"
    st = out.stats
    if st.elements_after > st.elements_before:
        return False, False, "kernel grew the universe"
    if inst.mode == OVERLAP:
        r, t, k = inst.r, inst.t, st.extra["k"]
        half = 2 * r ** r * k ** max(r - t - 1, 0)
        if st.elements_after > st.bound:
            return False, False, f"|U'|={st.elements_after} exceeds bound {st.bound}"
        if st.extra.get("val_R", 0) > half:
            return False, False, f"|val(R)|={st.extra['val_R']} exceeds {half}"
        if st.extra.get("O_kept", 0) > half:
            return False, False, f"|O \\ O'|={st.extra['O_kept']} exceeds {half}"
    else:
        if red.k != inst.k:
            return False, False, "membership kernel changed k"
        if st.elements_after > membership_bound(inst.r, inst.k):
            return False, False, f"|U'|={st.elements_after} exceeds bound"
    again = kernelize(red, budget)
    if again.early_solution is not None or again.reduced != red:
        return False, False, "kernel is not idempotent"
    return True, False, ""


def _random_graph_instance(rng: np.random.Generator, variant: str, max_n: int) -> GraphInstance:
    n = _int(rng, 4, max(4, min(max_n, 9)))
    p = float(rng.uniform(0.3, 0.45))
    g = random_graph(rng, n, p)
    pool = CLIQUE_FAMILIES if variant == CLIQUE_EDGE_OVERLAP else FAMILIES
    name = sorted(pool)[_int(rng, 0, len(pool) - 1)]
    if variant in MEMBERSHIP_VARIANTS:
        t = _int(rng, 1, 2)
    else:
        t = _int(rng, 0, 2)
    return GraphInstance(g, pool[name], t, _int(rng, 1, 4), variant)


def _graph_trial(inst: GraphInstance, budget: Budget) -> tuple[bool, bool, str]:
    out = kernelize(inst, budget)
    if out.early_solution is not None:
        problem = graph_solution_violation(inst, out.early_solution)
        return problem is None, True, problem or ""
    red = reduced_instance(out)
    if decide(inst, budget) != decide(red, budget):
        return False, False, "decision changed by kernelization"
    if out.stats.elements_after > out.stats.bound:
        return False, False, "reduced graph exceeds its bound"
    return True, False, ""


def _small_graph(rng: np.random.Generator, max_n: int = 5) -> Graph:
    return random_graph(rng, _int(rng, 0, max_n), float(rng.uniform(0.2, 0.9)))


def _lift_trial(suite: str, rng: np.random.Generator, budget: Budget) -> tuple[bool, bool, str]:
    g = _small_graph(rng)
    k = _int(rng, 0, 3)
    if suite == "p3-lift":
        fam, variant, lift = FAMILIES["P3"], VERTEX_MEMBERSHIP, lift_p3_membership(g, k, 1)
    else:
        fam, variant, lift = FAMILIES["K3"], EDGE_MEMBERSHIP, lift_c3_edge_membership(g, k, 1)
    before = decide(GraphInstance(g, fam, 1, k, variant), budget)
    after = decide(GraphInstance(lift.graph, fam, 2, lift.k, variant), budget)
    if before != after:
        return False, False, f"lift changed the decision ({before} -> {after})"
    return True, False, ""


def _star_trial(rng: np.random.Generator, budget: Budget) -> tuple[bool, bool, str]:
    n = _int(rng, 3, 5)
    g = random_graph(rng, n, float(rng.uniform(0.4, 0.9)))
    # keep the degree precondition by dropping edges at overfull vertices
    deg = [0] * n
    edges = []
    for u, v in g.edges:
        if deg[u] < 4 and deg[v] < 4:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    g = Graph.from_edges(n, edges)
    t = _int(rng, 0, 8)
    k = _int(rng, 1, 2)
    gad = star_overlap_gadget(g, t)
    before = decide(GraphInstance(g, FAMILIES["K3"], 0, k, VERTEX_OVERLAP), budget)
    after = decide(GraphInstance(gad.graph, GraphFamily((gad.pattern,)), t, k, VERTEX_OVERLAP), budget)
    if before != after:
        return False, False, f"star gadget changed the decision ({before} -> {after})"
    return True, False, ""


def _p2_trial(rng: np.random.Generator, budget: Budget) -> tuple[bool, bool, str]:
    g = random_graph(rng, _int(rng, 1, 8), float(rng.uniform(0.1, 0.9)))
    t = _int(rng, 1, 3)
    gadget = build_gadget(g, {v: t for v in range(g.n)})
    if gadget.n_vertices != 2 * g.m + t * g.n or gadget.n_edges != (2 * t + 1) * g.m:
        return False, False, "gadget size identity violated"
    best = len(solve_degree_constrained(g, {v: t for v in range(g.n)}))
    for k in (best, best + 1):
        ours = solve_p2_membership(g, t, k) is not None
        ref = decide(GraphInstance(g, GraphFamily((complete_graph(2),)), t, k,
                                   VERTEX_MEMBERSHIP), budget)
        if ours != ref:
            return False, False, f"k={k}: solver says {ours}, oracle says {ref}"
    return True, False, ""


# lifted targets grow with the host size, so gadget trials need a deeper search
GADGET_MIN_K = 12


def _run_one(suite: str, index: int, trial: int, opts: CheckOptions,
             budget: Budget) -> TrialResult:
    rng = stream(opts.seed, index, trial)
    if suite in GADGET_SUITES:
        budget = budget.replace(oracle_k=max(budget.oracle_k, GADGET_MIN_K))
    try:
        if suite == "set-overlap":
            ok, early, msg = _set_trial(random_set_instance(rng, OVERLAP, opts.max_n, opts.max_sets), budget)
        elif suite == "set-membership":
            ok, early, msg = _set_trial(random_set_instance(rng, MEMBERSHIP, opts.max_n, opts.max_sets), budget)
        elif suite in GRAPH_VARIANTS:
            ok, early, msg = _graph_trial(_random_graph_instance(rng, suite, opts.max_n), budget)
        elif suite in ("p3-lift", "c3-lift"):
            ok, early, msg = _lift_trial(suite, rng, budget)
        elif suite == "star-overlap":
            ok, early, msg = _star_trial(rng, budget)
        elif suite == "p2":
            ok, early, msg = _p2_trial(rng, budget)
        else:
            raise ValueError(f"unknown suite {suite!r}")
    except BudgetExceeded as exc:
        ok, early, msg = False, False, str(exc)
    return TrialResult(suite, trial, ok, early, msg)


def run_check(opts: CheckOptions, budget: Budget | None = None,
              progress: Callable[[TrialResult], None] | None = None) -> list[TrialResult]:
    budget = budget or get_budget()
    results = []
    for suite in opts.suites:
        index = ALL_SUITES.index(suite)
        for trial in range(opts.trials):
            res = _run_one(suite, index, trial, opts, budget)
            results.append(res)
            if progress is not None:
                progress(res)
    return results


def format_report(opts: CheckOptions, results: list[TrialResult]) -> str:
    lines = [f"check seed={opts.seed} trials={opts.trials} max_n={opts.max_n} "
             f"max_sets={opts.max_sets} suites={','.join(opts.suites)}"]
    for suite in opts.suites:
        rows = [r for r in results if r.suite == suite]
        passed = sum(r.ok for r in rows)
        early = sum(r.early for r in rows)
        lines.append(f"{suite}: trials={len(rows)} passed={passed} failed={len(rows) - passed} "
                     f"early={early}")
        for r in rows:
            if not r.ok:
                lines.append(f"  FAIL trial {r.trial}: {r.message}")
    failed = sum(not r.ok for r in results)
    lines.append(f"result: {'PASS' if failed == 0 else 'FAIL'} ({len(results) - failed}/{len(results)})")
    return "\n".join(lines) + "\n"


def clique_check(g: Graph, family: GraphFamily, t: int, k: int,
                 budget: Budget | None = None) -> tuple[bool, bool]:
    """Edge-overlap oracle decision and the kernel-route decision for a clique family."""
    inst = GraphInstance(g, family, t, k, CLIQUE_EDGE_OVERLAP)
    reference = decide(inst.with_(variant="edge-overlap"), budget)
    as_vertex = inst.with_(variant=VERTEX_OVERLAP, t=clique_overlap_bound(t))
    return reference, decide(as_vertex, budget)


__all__ = [
    "ALL_SUITES",
    "CheckOptions",
    "TrialResult",
    "clique_check",
    "format_report",
    "run_check",
]
