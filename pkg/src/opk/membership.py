"""Membership kernels via a parameter-preserving map to disjoint packing.

Every element ``u`` is split into copies ``(u, 1) .. (u, t)`` and each source
item gets a token element. An item with elements ``x_1 .. x_s`` becomes the
``t^s`` sets ``{(x_1, j_1), .., (x_s, j_s), token}``. A packing in which no
element is used more than ``t`` times corresponds to ``k`` pairwise disjoint
transformed sets, and items sharing a token can never be chosen together.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Sequence

from opk.config import Budget, BudgetExceeded, get_budget
from opk.model import (
    EDGE_MEMBERSHIP,
    EDGE_MEMBERSHIP_NISV,
    INDUCED_MEMBERSHIP,
    MEMBERSHIP,
    OVERLAP,
    P2_MEMBERSHIP,
    VERTEX_MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    Graph,
    GraphFamily,
    GraphInstance,
    InstanceError,
    KernelStats,
    PackingSolution,
    SetInstance,
    Subgraph,
    complete_graph,
)
from opk.overlap import KernelOutcome, ReductionTrace, kernelize_set_overlap
from opk.subgraphs import dedupe_by_vertex_set, enumerate_subgraphs


class TransformError(RuntimeError):
    """A reduced transformed instance does not decode back to source items."""


@dataclass(frozen=True)
class TaggedElement:
    """Decoded view of a transformed element: a copy ``(base, copy)`` or a token."""

    base: Hashable | None = None
    copy: int | None = None
    token: Hashable | None = None

    @property
    def is_token(self) -> bool:
        return self.token is not None

    def label(self) -> str:
        if self.is_token:
            return f"⟨{self.token}⟩"
        return f"({self.base},{self.copy})"


@dataclass(frozen=True)
class DisjointTransform:
    """Transformed instance plus the registry needed to decode it."""

    instance: SetInstance
    base: tuple[Hashable, ...]
    tokens: tuple[Hashable, ...]
    t: int

    def decode(self, x: int) -> TaggedElement:
        split = len(self.base) * self.t
        if x >= split:
            return TaggedElement(token=self.tokens[x - split])
        return TaggedElement(base=self.base[x // self.t], copy=x % self.t + 1)

    def split(self, s: Sequence[int]) -> tuple[Hashable, tuple[Hashable, ...]]:
        """Token and base elements of one transformed set."""
        tokens = [self.decode(x) for x in s if x >= len(self.base) * self.t]
        if len(tokens) != 1:
            raise TransformError(f"transformed set {list(s)} carries {len(tokens)} tokens")
        bases = tuple(self.decode(x).base for x in s if x < len(self.base) * self.t)
        return tokens[0].token, bases

    def element_labels(self) -> list[str]:
        return [self.decode(x).label() for x in self.instance.universe]


def transform_items(base: Sequence[Hashable], items: Sequence[tuple[Sequence[Hashable], Hashable]],
                    t: int, k: int, budget: Budget | None = None) -> DisjointTransform:
    """Generic copy-and-token transformation.

    ``items`` pairs each item's elements with its token key; several items may
    share a token, which forbids choosing more than one of them.
    """
    budget = budget or get_budget()
    if t < 1:
        raise InstanceError("membership bound t must be >= 1")
    r = max((len(e) for e, _ in items), default=1)
    estimate = t ** r * len(items)
    if estimate > budget.transform:
        raise BudgetExceeded("transform", estimate, budget.transform)
    base = tuple(base)
    index = {u: i for i, u in enumerate(base)}
    token_ids: dict[Hashable, int] = {}
    for _, key in items:
        token_ids.setdefault(key, len(token_ids))
    offset = len(base) * t
    out: list[tuple[int, ...]] = []
    for elements, key in items:
        slots = [index[u] * t for u in sorted(elements, key=index.__getitem__)]
        token = offset + token_ids[key]
        for copies in product(range(t), repeat=len(slots)):
            out.append(tuple(s + c for s, c in zip(slots, copies)) + (token,))
    universe = tuple(range(offset + len(token_ids)))
    inst = SetInstance(universe, tuple(out), r + 1, 0, k, OVERLAP)
    return DisjointTransform(inst, base, tuple(token_ids), t)


def transform_membership_to_disjoint(instance: SetInstance, budget: Budget | None = None
                                     ) -> DisjointTransform:
    if instance.mode != MEMBERSHIP:
        raise InstanceError("transform needs a membership instance")
    items = [(s, i) for i, s in enumerate(instance.sets)]
    dt = transform_items(instance.universe, items, instance.t, instance.k, budget)
    # the declared arity of the source, not the largest set present
    return DisjointTransform(dt.instance.with_(r=instance.r + 1), dt.base, dt.tokens, dt.t)


DisjointKernelizer = Callable[[SetInstance], KernelOutcome]


def disjoint_kernelizer(instance: SetInstance) -> KernelOutcome:
    """Default backend for disjoint packing: the overlap kernel with ``t = 0``."""
    if instance.t != 0 or instance.mode != OVERLAP:
        raise InstanceError("disjoint kernelizer needs an overlap instance with t = 0")
    return kernelize_set_overlap(instance)


def membership_bound(r: int, k: int) -> int:
    """Element bound ``4 (r+1)^(r+1) k^r`` of the default backend."""
    return 4 * (r + 1) ** (r + 1) * max(k, 0) ** r


def reinterpret_set_kernel(original: SetInstance, reduced: SetInstance,
                           transform: DisjointTransform) -> SetInstance:
    surviving_tokens: set[int] = set()
    bases: set[Hashable] = set()
    for s in reduced.sets:
        token, elems = transform.split(s)
        surviving_tokens.add(token)
        bases.update(elems)
    for x in reduced.universe:
        tag = transform.decode(x)
        if not tag.is_token:
            bases.add(tag.base)
    sets = [original.sets[i] for i in sorted(surviving_tokens)]
    for s in sets:
        if not set(s) <= bases:
            raise TransformError(f"surviving set {list(s)} lost some of its elements")
    return original.with_(universe=tuple(u for u in original.universe if u in bases),
                          sets=tuple(sets))


def _decode_early(sol: PackingSolution, transform: DisjointTransform) -> list[tuple[Hashable, tuple]]:
    return [transform.split(s) for s in sol.sets]


def kernelize_set_membership(instance: SetInstance, budget: Budget | None = None,
                             backend: DisjointKernelizer = disjoint_kernelizer,
                             max_passes: int = 16) -> KernelOutcome:
    if instance.mode != MEMBERSHIP:
        raise InstanceError("kernelize_set_membership needs a membership instance")
    stats = KernelStats(len(instance.universe), 0, len(instance.sets), 0,
                        membership_bound(instance.r, instance.k))
    if instance.k <= 0:
        stats.early_solution = True
        return KernelOutcome(PackingSolution(sets=()), None, ReductionTrace(), stats)
    current = instance
    trace = ReductionTrace()
    for _ in range(max_passes):
        dt = transform_membership_to_disjoint(current, budget)
        out = backend(dt.instance)
        trace = out.trace
        if out.early_solution is not None:
            chosen = [current.sets[token] for token, _ in _decode_early(out.early_solution, dt)]
            stats.early_solution = True
            stats.sets_after = len(chosen)
            stats.elements_after = len({x for s in chosen for x in s})
            stats.extra["transformed_elements"] = len(dt.instance.universe)
            return KernelOutcome(PackingSolution(sets=tuple(chosen)), None, trace, stats)
        reduced = reinterpret_set_kernel(current, out.reduced, dt)
        stats.extra["transformed_elements"] = len(dt.instance.universe)
        stats.extra["transformed_after"] = len(out.reduced.universe)
        if reduced == current:
            break
        current = reduced
    stats.elements_after = len(current.universe)
    stats.sets_after = len(current.sets)
    return KernelOutcome(None, current, trace, stats)


# ---------------------------------------------------------------- graphs


def _strip_isolated(instance: GraphInstance) -> tuple[Graph, list[int]]:
    if any(h.isolated() for h in instance.family.members):
        raise InstanceError("edge variants need family members without isolated vertices")
    iso = set(instance.g.isolated())
    keep = [v for v in range(instance.g.n) if v not in iso]
    return instance.g.induced(keep), keep


def _graph_outcome(instance: GraphInstance, keep_host: set[int], host_to_orig: Sequence[int],
                   trace: ReductionTrace, stats: KernelStats) -> tuple[Graph, KernelOutcome]:
    g_red = instance.g.induced(sorted(host_to_orig[v] for v in keep_host))
    stats.elements_after = g_red.n
    out = KernelOutcome(None, None, trace, stats, instance.with_(g=g_red))
    return g_red, out


def _early_graph(instance: GraphInstance, chosen: Sequence[Subgraph], host_to_orig: Sequence[int],
                 trace: ReductionTrace, stats: KernelStats) -> tuple[Graph, KernelOutcome]:
    sol = PackingSolution(subgraphs=tuple(
        Subgraph.make((host_to_orig[v] for v in sg.vertices),
                      ((host_to_orig[a], host_to_orig[b]) for a, b in sg.edges))
        for sg in chosen))
    stats.early_solution = True
    stats.sets_after = len(chosen)
    stats.elements_after = len({v for sg in sol.subgraphs for v in sg.vertices})
    return instance.g, KernelOutcome(sol, None, trace, stats)


def kernelize_graph_membership(instance: GraphInstance, budget: Budget | None = None
                               ) -> tuple[Graph, KernelOutcome]:
    """Vertex, induced and edge membership through the set membership kernel."""
    variant = instance.variant
    family = instance.family
    if variant == P2_MEMBERSHIP:
        family = GraphFamily((complete_graph(2),))
    if variant not in (VERTEX_MEMBERSHIP, INDUCED_MEMBERSHIP, EDGE_MEMBERSHIP, P2_MEMBERSHIP):
        raise InstanceError(f"{variant} is not handled by kernelize_graph_membership")
    on_edges = variant == EDGE_MEMBERSHIP
    if on_edges:
        host, host_to_orig = _strip_isolated(instance)
    else:
        host, host_to_orig = instance.g, list(range(instance.g.n))
    cat = enumerate_subgraphs(host, family, instance.induced, budget)
    if not on_edges:
        cat = dedupe_by_vertex_set(cat)
    entries = list(cat.entries)
    obj = (lambda sg: sg.edges) if on_edges else (lambda sg: sg.vertices)
    by_object = {obj(sg): sg for sg in entries}
    r = family.m_h if on_edges else family.r_h
    universe = host.edges if on_edges else tuple(range(host.n))
    set_inst = SetInstance(universe, tuple(by_object), max(r, 1), instance.t, instance.k, MEMBERSHIP)
    out = kernelize_set_membership(set_inst, budget)
    stats = KernelStats(instance.g.n, 0, len(entries), 0,
                        (2 if on_edges else 1) * membership_bound(max(r, 1), instance.k),
                        extra={"r": r, "set_kernel": out.stats.to_json()})
    if out.early_solution is not None:
        chosen = [by_object[s] for s in out.early_solution.sets]
        return _early_graph(instance, chosen, host_to_orig, out.trace, stats)
    keep: set[int] = set()
    for x in out.reduced.universe:
        keep.update(x if on_edges else (x,))
    stats.sets_after = len(out.reduced.sets)
    return _graph_outcome(instance, keep, host_to_orig, out.trace, stats)


def _kernelize_tokened(instance: GraphInstance, budget: Budget | None, on_edges: bool
                       ) -> tuple[Graph, KernelOutcome]:
    """ISV (vertex copies, edge-set tokens) and NISV (edge copies, vertex-set tokens)."""
    if on_edges:
        host, host_to_orig = _strip_isolated(instance)
    else:
        if any(h.isolated() for h in instance.family.members):
            raise InstanceError("ISV needs family members without isolated vertices")
        host, host_to_orig = instance.g, list(range(instance.g.n))
    entries = list(enumerate_subgraphs(host, instance.family, False, budget).entries)
    if on_edges:
        items = [(sg.edges, sg.vertices) for sg in entries]
        base: tuple = host.edges
        r = instance.family.m_h
    else:
        items = [(sg.vertices, sg.edges) for sg in entries]
        base = tuple(range(host.n))
        r = instance.family.r_h
    dt = transform_items(base, items, instance.t, instance.k, budget)
    dt = DisjointTransform(dt.instance.with_(r=max(r, 1) + 1), dt.base, dt.tokens, dt.t)
    stats = KernelStats(instance.g.n, 0, len(entries), 0,
                        (2 if on_edges else 1) * membership_bound(max(r, 1), instance.k),
                        extra={"r": r, "transformed_elements": len(dt.instance.universe)})
    if instance.k <= 0:
        return _early_graph(instance, [], host_to_orig, ReductionTrace(), stats)
    out = disjoint_kernelizer(dt.instance)
    stats.extra["set_kernel"] = out.stats.to_json()
    lookup = {(key, tuple(sorted(elems))): sg for sg, (elems, key) in zip(entries, items)}
    if out.early_solution is not None:
        chosen = []
        for token, elems in _decode_early(out.early_solution, dt):
            chosen.append(lookup[token, tuple(sorted(elems))])
        return _early_graph(instance, chosen, host_to_orig, out.trace, stats)
    keep: set[int] = set()
    for s in out.reduced.sets:
        token, elems = dt.split(s)
        if on_edges:
            keep.update(token)
            for e in elems:
                keep.update(e)
        else:
            keep.update(elems)
            for e in token:
                keep.update(e)
    stats.sets_after = len(out.reduced.sets)
    stats.extra["transformed_after"] = len(out.reduced.universe)
    return _graph_outcome(instance, keep, host_to_orig, out.trace, stats)


def kernelize_graph_membership_isv(instance: GraphInstance, budget: Budget | None = None
                                   ) -> tuple[Graph, KernelOutcome]:
    if instance.variant != VERTEX_MEMBERSHIP_ISV:
        raise InstanceError("expected the vertex-membership-ISV variant")
    return _kernelize_tokened(instance, budget, on_edges=False)


def kernelize_graph_membership_nisv(instance: GraphInstance, budget: Budget | None = None
                                    ) -> tuple[Graph, KernelOutcome]:
    if instance.variant != EDGE_MEMBERSHIP_NISV:
        raise InstanceError("expected the edge-membership-NISV variant")
    return _kernelize_tokened(instance, budget, on_edges=True)


def transform_witness(instance: SetInstance, chosen: Sequence[Sequence[Hashable]],
                      transform: DisjointTransform) -> list[tuple[int, ...]]:
    """Map a membership packing to disjoint transformed sets.

    The copy index of an element is its occupancy before the current set, so
    copies never clash while every element stays within ``t`` sets.
    """
    index = {u: i for i, u in enumerate(transform.base)}
    token_of = {s: i for i, s in enumerate(instance.sets)}
    occupancy: dict[Hashable, int] = {}
    out = []
    offset = len(transform.base) * transform.t
    for s in chosen:
        s = tuple(s)
        elems = []
        for u in sorted(s, key=index.__getitem__):
            c = occupancy.get(u, 0)
            if c >= transform.t:
                raise InstanceError(f"element {u!r} exceeds membership bound")
            occupancy[u] = c + 1
            elems.append(index[u] * transform.t + c)
        elems.append(offset + transform.tokens.index(token_of[s]))
        out.append(tuple(elems))
    return out
