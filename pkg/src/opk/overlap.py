"""Kernelization for r-Set Packing with t-Overlap and its graph versions.

The pipeline grows a maximal (r, r-2)-packing ``R`` while pruning extra sets
from it, removes those extras from the instance, then either finds ``k``
pairwise compatible sets inside ``R`` or drops elements outside ``val(R)``
that a maximum matching leaves uncovered.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Iterable, Sequence

from opk.config import Budget
from opk.matching import ConflictBipartite, bipartite_max_matching
from opk.model import (
    CLIQUE_EDGE_OVERLAP,
    EDGE_OVERLAP,
    INDUCED_OVERLAP,
    OVERLAP,
    VERTEX_OVERLAP,
    Graph,
    GraphInstance,
    InstanceError,
    KernelStats,
    PackingSolution,
    SetInstance,
    Subgraph,
    canonical_set,
    set_order_key,
)
from opk.subgraphs import dedupe_by_vertex_set, enumerate_subgraphs

SetT = tuple


class StructureError(RuntimeError):
    """A set violates the shape the matching reduction relies on."""


@dataclass
class ReductionTrace:
    R: list[SetT] = field(default_factory=list)
    extra: list[SetT] = field(default_factory=list)
    M: list[SetT] = field(default_factory=list)
    O: list[Hashable] = field(default_factory=list)
    O_removed: list[Hashable] = field(default_factory=list)
    sets_removed_by_matching: list[SetT] = field(default_factory=list)
    f_table: dict[int, int] = field(default_factory=dict)
    forced: list[SetT] = field(default_factory=list)
    passes: int = 0
    rounds: list[dict[str, Any]] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        def enc(s: SetT) -> list:
            return [list(x) if isinstance(x, tuple) else x for x in s]

        def enc_el(x: Any) -> Any:
            return list(x) if isinstance(x, tuple) else x

        return {
            "R": [enc(s) for s in self.R],
            "extra": [enc(s) for s in self.extra],
            "M": [enc(s) for s in self.M],
            "O": [enc_el(x) for x in self.O],
            "O_removed": [enc_el(x) for x in self.O_removed],
            "sets_removed_by_matching": [enc(s) for s in self.sets_removed_by_matching],
            "f_table": {str(i): v for i, v in sorted(self.f_table.items())},
            "forced": [enc(s) for s in self.forced],
            "passes": self.passes,
            "rounds": self.rounds,
        }


@dataclass
class KernelOutcome:
    """Either ``early_solution`` is set, or ``reduced`` holds the kernel."""

    early_solution: PackingSolution | None
    reduced: SetInstance | None
    trace: ReductionTrace
    stats: KernelStats
    graph: GraphInstance | None = None

    @property
    def is_early(self) -> bool:
        return self.early_solution is not None


def _canon(sets: Iterable[SetT]) -> list[SetT]:
    return sorted(sets, key=set_order_key)


def overlap_bound(r: int, t: int, k: int) -> int:
    """Element bound ``4 r^r k^(r-t-1)`` of the overlap kernel."""
    return 4 * r ** r * max(k, 0) ** max(r - t - 1, 0)


# ---------------------------------------------------------------- rules


def presolve_small_sets(instance: SetInstance) -> tuple[SetInstance, list[SetT]]:
    """Move sets of size at most ``t`` out of the instance; they fit any packing."""
    forced = [s for s in instance.sets if len(s) <= instance.t]
    if not forced:
        return instance, []
    rest = [s for s in instance.sets if len(s) > instance.t]
    return instance.with_(sets=tuple(rest), k=max(instance.k - len(forced), 0)), forced


def handle_t_max(instance: SetInstance) -> bool | None:
    """With ``t = r-1`` any distinct sets are compatible; decide by counting."""
    if instance.t >= instance.r - 1:
        return len(instance.sets) >= instance.k
    return None


def reduce_unused_elements(instance: SetInstance) -> SetInstance:
    used = {x for s in instance.sets for x in s}
    if len(used) == len(instance.universe):
        return instance
    return instance.with_(universe=tuple(x for x in instance.universe if x in used))


def greedy_maximal_packing(sets: Sequence[SetT], overlap_bound: int,
                           initial: Sequence[SetT] = (),
                           order: Sequence[SetT] | None = None) -> list[SetT]:
    """Extend ``initial`` greedily to a maximal packing with pairwise overlap <= bound.

    Candidates are tried in ``order`` first (when given), then in canonical order.
    """
    chosen = list(initial)
    members = set(chosen)
    index: dict[Hashable, list[int]] = defaultdict(list)
    for pos, s in enumerate(chosen):
        for x in s:
            index[x].append(pos)
    available = set(sets)
    queue = [s for s in (order or ()) if s in available]
    queue += _canon(available)
    for s in queue:
        if s in members:
            continue
        counts: Counter[int] = Counter()
        ok = True
        for x in s:
            for pos in index.get(x, ()):
                counts[pos] += 1
                if counts[pos] > overlap_bound:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        pos = len(chosen)
        chosen.append(s)
        members.add(s)
        for x in s:
            index[x].append(pos)
    return chosen


def max_pairwise_overlap(sets: Sequence[SetT]) -> int:
    index: dict[Hashable, list[int]] = defaultdict(list)
    for pos, s in enumerate(sets):
        for x in s:
            index[x].append(pos)
    pair_counts: Counter[tuple[int, int]] = Counter()
    for owners in index.values():
        for a, b in combinations(owners, 2):
            pair_counts[a, b] += 1
    return max(pair_counts.values(), default=0)


def threshold_f(i: int, t_ini: int, r: int, t: int, k: int, cap: int | None = None) -> int:
    """Value of ``f(i) = (r-t)(k-1) f(i+1) + 1`` with ``f(t_ini+1) = 1``.

    With ``cap`` the value saturates there; only comparisons against counts
    no larger than ``cap - 1`` are ever made.
    """
    if not t + 1 <= i <= t_ini + 1:
        raise ValueError(f"i={i} outside [t+1, t_ini+1] = [{t + 1}, {t_ini + 1}]")
    x = (r - t) * (k - 1)
    value = 1
    for _ in range(t_ini + 1 - i):
        value = x * value + 1
        if cap is not None and value >= cap:
            return cap
    return value


def extra_sets_reduction(R: Sequence[SetT], r: int, t: int, k: int,
                         f_table: dict[int, int] | None = None) -> list[SetT]:
    """Sets of ``R`` that can be dropped without losing a (k, r, t)-packing."""
    alive = set(R)
    t_ini = max_pairwise_overlap(list(R))
    cap = len(R) + 1
    extra: list[SetT] = []
    for i in range(t_ini, t, -1):
        f_i = threshold_f(i, t_ini, r, t, k, cap)
        if f_table is not None:
            f_table.setdefault(i, f_i)
        containing: dict[SetT, list[SetT]] = defaultdict(list)
        for s in _canon(alive):
            for p in combinations(s, i):
                containing[p].append(s)
        for s in _canon(alive):
            if s not in alive or len(s) <= i:
                continue
            for p in combinations(s, i):
                family = [x for x in containing[p] if x in alive]
                if len(family) > f_i:
                    for dropped in family[f_i:]:
                        alive.discard(dropped)
                        extra.append(dropped)
                if s not in alive:
                    break
    return extra


def build_conflict_bipartite(O: Sequence[Hashable], S_minus_R: Sequence[SetT]) -> ConflictBipartite:
    """Left side: ``O``. Right side: the (r-1)-subsets ``P`` with ``{o} | P`` a set."""
    o_index = {o: i for i, o in enumerate(O)}
    right: dict[SetT, int] = {}
    edges: list[tuple[int, int]] = []
    for s in S_minus_R:
        hits = [x for x in s if x in o_index]
        if len(hits) != 1:
            raise StructureError(f"set {list(s)} holds {len(hits)} elements of O, expected 1")
        o = hits[0]
        p = tuple(x for x in s if x != o)
        j = right.setdefault(p, len(right))
        edges.append((o_index[o], j))
    ordered = sorted(right, key=lambda p: right[p])
    return ConflictBipartite(tuple(O), tuple(ordered), tuple(sorted(set(edges))))


def matching_reduction(instance: SetInstance, R: Sequence[SetT]
                       ) -> tuple[SetInstance, list[Hashable], list[SetT], list[Hashable]]:
    """Drop elements of ``O`` left unmatched, together with the sets holding them.

    Returns ``(reduced, removed_elements, removed_sets, O)``. Sets outside ``R``
    without any ``O`` element cannot contain a removed element and are kept as is.
    """
    in_r = set(R)
    val_r = {x for s in R for x in s}
    O = [x for x in instance.universe if x not in val_r]
    outside = [s for s in instance.sets if s not in in_r]
    with_o = [s for s in outside if any(x not in val_r for x in s)]
    b = build_conflict_bipartite(O, with_o)
    matched = {o for o, _ in bipartite_max_matching(b)}
    removed = [o for o in O if o not in matched]
    if not removed:
        return instance, [], [], O
    gone = set(removed)
    removed_sets = [s for s in with_o if any(x in gone for x in s)]
    dead = set(removed_sets)
    reduced = instance.with_(
        universe=tuple(x for x in instance.universe if x not in gone),
        sets=tuple(s for s in instance.sets if s not in dead),
    )
    return reduced, removed, removed_sets, O


# ---------------------------------------------------------------- pipeline


def _single_pass(instance: SetInstance, trace: ReductionTrace,
                 order: Sequence[SetT] | None, early_exit: bool
                 ) -> tuple[SetInstance, list[SetT] | None]:
    """One run of the overlap pipeline on an instance with all sets larger than t."""
    r, t, k = instance.r, instance.t, instance.k
    inst = reduce_unused_elements(instance)
    R: list[SetT] = []
    extra: set[SetT] = set()
    first = True
    while True:
        candidates = [s for s in inst.sets if s not in extra]
        grown = greedy_maximal_packing(candidates, r - 2, R, order if first else None)
        first = False
        if len(grown) == len(R):
            break
        R = grown
        dropped = extra_sets_reduction(R, r, t, k, trace.f_table)
        if dropped:
            extra.update(dropped)
            dead = set(dropped)
            R = [s for s in R if s not in dead]
    if extra:
        inst = reduce_unused_elements(inst.with_(sets=tuple(s for s in inst.sets if s not in extra)))
    trace.extra.extend(_canon(extra))
    trace.R = _canon(R)
    M = greedy_maximal_packing(R, t, (), order)
    trace.M = _canon(M)
    record: dict[str, Any] = {"R": trace.R, "extra": _canon(extra), "M": trace.M}
    trace.rounds.append(record)
    if early_exit and len(M) >= k:
        return inst, M[:k]
    reduced, removed, removed_sets, O = matching_reduction(inst, R)
    trace.O = list(O)
    trace.O_removed.extend(removed)
    trace.sets_removed_by_matching.extend(removed_sets)
    record.update(O=list(O), O_removed=removed, sets_removed_by_matching=removed_sets)
    return reduced, None


def kernelize_set_overlap(instance: SetInstance, *, order: Sequence[SetT] | None = None,
                          early_exit: bool = True, max_passes: int = 64) -> KernelOutcome:
    """Run the overlap kernel until the instance stops changing.

    ``order`` gives greedy priority to the listed sets on the first pass;
    ``early_exit=False`` skips the shortcut taken when ``R`` already holds a
    solution, so the matching step is always reached.
    """
    if instance.mode != OVERLAP:
        raise InstanceError("kernelize_set_overlap needs an overlap instance")
    if order is not None:
        order = [canonical_set(s) for s in order]
        unknown = [list(s) for s in order if s not in set(instance.sets)]
        if unknown:
            raise InstanceError(f"priority order names sets not in the instance: {unknown}")
    trace = ReductionTrace()
    stats = KernelStats(len(instance.universe), 0, len(instance.sets), 0, 0)

    def finish(early: list[SetT] | None, reduced: SetInstance | None, k_eff: int) -> KernelOutcome:
        stats.bound = overlap_bound(instance.r, instance.t, k_eff)
        stats.extra["k"] = k_eff
        if early is not None:
            stats.early_solution = True
            stats.elements_after = len({x for s in early for x in s})
            stats.sets_after = len(early)
            return KernelOutcome(PackingSolution(sets=tuple(early)), None, trace, stats)
        stats.elements_after = len(reduced.universe)
        stats.sets_after = len(reduced.sets)
        stats.extra["val_R"] = len({x for s in trace.R for x in s})
        stats.extra["O_kept"] = len(set(trace.O) - set(trace.O_removed))
        return KernelOutcome(None, reduced, trace, stats)

    inst, forced = presolve_small_sets(instance)
    trace.forced = list(forced)
    if len(forced) >= instance.k:
        return finish(forced[: instance.k], None, 0)
    k_eff = inst.k
    verdict = handle_t_max(inst)
    if verdict is not None:
        if verdict:
            return finish(forced + _canon(inst.sets)[:k_eff], None, k_eff)
        return finish(None, inst.with_(universe=(), sets=()), k_eff)
    current = inst
    for _ in range(max_passes):
        trace.passes += 1
        reduced, early = _single_pass(current, trace, order if trace.passes == 1 else None,
                                      early_exit)
        if early is not None:
            return finish(forced + early, None, k_eff)
        if reduced == current:
            break
        current = reduced
    return finish(None, current, k_eff)


# ---------------------------------------------------------------- graphs


def clique_overlap_bound(t: int) -> int:
    """Largest ``t'`` with ``t'(t'-1)/2 <= t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    tp = 1
    while (tp + 1) * tp // 2 <= t:
        tp += 1
    return tp


def _entries_for_overlap(instance: GraphInstance, budget: Budget | None
                         ) -> tuple[Graph, list[Subgraph], list[Subgraph], str]:
    """Host graph used, small entries (always compatible), large entries, object kind."""
    g = instance.g
    if instance.on_edges:
        if any(h.isolated() for h in instance.family.members):
            raise InstanceError("edge variants need family members without isolated vertices")
        keep = [v for v in range(g.n) if v not in set(g.isolated())]
        if len(keep) != g.n:
            g = g.induced(keep)
    cat = enumerate_subgraphs(g, instance.family, instance.induced, budget)
    size = (lambda sg: len(sg.edges)) if instance.on_edges else (lambda sg: len(sg.vertices))
    small = [sg for sg in cat.entries if size(sg) <= instance.t]
    large_cat = type(cat)(tuple(sg for sg in cat.entries if size(sg) > instance.t))
    if not instance.on_edges:
        large_cat = dedupe_by_vertex_set(large_cat)
    return g, small, list(large_cat.entries), "edges" if instance.on_edges else "vertices"


def kernelize_graph_overlap(instance: GraphInstance, budget: Budget | None = None,
                            early_exit: bool = True) -> tuple[Graph, KernelOutcome]:
    """Kernel for the vertex, induced and edge overlap variants.

    Returns the reduced graph (an induced subgraph with labels naming the
    original vertices) and the outcome, whose ``graph`` field is the reduced
    graph instance. Early solutions are expressed in the input's vertex ids.
    """
    if instance.variant == CLIQUE_EDGE_OVERLAP:
        as_vertex = instance.with_(variant=VERTEX_OVERLAP, t=clique_overlap_bound(instance.t))
        g2, out = kernelize_graph_overlap(as_vertex, budget, early_exit)
        if out.graph is not None:
            out.graph = out.graph.with_(variant=CLIQUE_EDGE_OVERLAP, t=instance.t)
        return g2, out
    if instance.variant not in (VERTEX_OVERLAP, INDUCED_OVERLAP, EDGE_OVERLAP):
        raise InstanceError(f"{instance.variant} is not an overlap variant")
    host, small, large, kind = _entries_for_overlap(instance, budget)
    # host vertex i corresponds to original vertex host_to_orig[i]
    host_to_orig = list(host.labels) if host.labels is not None else list(range(host.n))
    if host.labels is not None and instance.g.labels is not None:
        label_pos = {lab: v for v, lab in enumerate(instance.g.labels)}
        host_to_orig = [label_pos[lab] for lab in host.labels]
    k = instance.k
    r = instance.family.m_h if kind == "edges" else instance.family.r_h
    obj = (lambda sg: sg.edges) if kind == "edges" else (lambda sg: sg.vertices)
    by_object = {obj(sg): sg for sg in large}

    def to_orig(sg: Subgraph) -> Subgraph:
        return Subgraph.make((host_to_orig[v] for v in sg.vertices),
                             ((host_to_orig[u], host_to_orig[v]) for u, v in sg.edges))

    def stats_for(after: int, early: bool) -> KernelStats:
        factor = 2 if kind == "edges" else 1
        r_vertices = instance.family.r_h
        bound = factor * overlap_bound(r, min(instance.t, r - 1), k) + r_vertices * max(k - 1, 0)
        return KernelStats(instance.g.n, after, len(small) + len(large),
                           0, bound, early, {"r": r, "objects": kind})

    if len(small) >= k:
        sol = PackingSolution(subgraphs=tuple(to_orig(sg) for sg in small[:k]))
        trace = ReductionTrace(forced=[obj(sg) for sg in small[:k]])
        st = stats_for(len({v for sg in small[:k] for v in sg.vertices}), True)
        st.sets_after = k
        return instance.g, KernelOutcome(sol, None, trace, st)
    universe = tuple(host.edges) if kind == "edges" else tuple(range(host.n))
    set_inst = SetInstance(universe, tuple(by_object), r, min(instance.t, r - 1),
                           k - len(small), OVERLAP)
    out = kernelize_set_overlap(set_inst, early_exit=early_exit)
    if out.early_solution is not None:
        chosen = list(small) + [by_object[s] for s in out.early_solution.sets]
        sol = PackingSolution(subgraphs=tuple(to_orig(sg) for sg in chosen))
        st = stats_for(len({v for sg in chosen for v in sg.vertices}), True)
        st.sets_after = len(chosen)
        out.early_solution = sol
        out.stats = st
        return instance.g, out
    keep: set[int] = set()
    for sg in small:
        keep.update(sg.vertices)
    for x in out.reduced.universe:
        keep.update(x if kind == "edges" else (x,))
    orig_keep = sorted(host_to_orig[v] for v in keep)
    g_red = instance.g.induced(orig_keep)
    reduced_instance = instance.with_(g=g_red)
    st = stats_for(g_red.n, False)
    st.sets_after = len(small) + len(out.reduced.sets)
    st.extra["set_kernel"] = out.stats.to_json()
    out.stats = st
    out.graph = reduced_instance
    return g_red, out
