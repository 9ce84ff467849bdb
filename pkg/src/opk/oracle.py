"""Exhaustive decision procedures used as ground truth."""

from __future__ import annotations

from typing import Hashable, Sequence

from opk import _core
from opk.config import Budget, BudgetExceeded, get_budget
from opk.model import (
    EDGE_MEMBERSHIP,
    EDGE_MEMBERSHIP_NISV,
    INDUCED_MEMBERSHIP,
    MEMBERSHIP,
    P2_MEMBERSHIP,
    VERTEX_MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    GraphFamily,
    GraphInstance,
    PackingSolution,
    SetInstance,
    Subgraph,
    complete_graph,
)
from opk.subgraphs import dedupe_by_vertex_set, enumerate_subgraphs


def _check_budget(n_items: int, k: int, budget: Budget) -> None:
    if n_items > budget.oracle_items:
        raise BudgetExceeded("items", n_items, budget.oracle_items)
    if n_items > budget.oracle_sets and k > budget.oracle_k:
        raise BudgetExceeded("k", k, budget.oracle_k)


def _masks(items: Sequence[Sequence[Hashable]]) -> list[int]:
    index: dict[Hashable, int] = {}
    out = []
    for item in items:
        m = 0
        for x in item:
            m |= 1 << index.setdefault(x, len(index))
        out.append(m)
    return out


def search_items(items: Sequence[Sequence[Hashable]], k: int, t: int, mode: str,
                 groups: Sequence[Hashable] | None = None,
                 budget: Budget | None = None) -> list[int] | None:
    """Indices of ``k`` items forming a packing in ``mode``, or ``None``."""
    budget = budget or get_budget()
    if k <= 0:
        return []
    if k > len(items):
        return None
    _check_budget(len(items), k, budget)
    masks = _masks(items)
    if mode == MEMBERSHIP:
        gids = None
        if groups is not None:
            ids: dict[Hashable, int] = {}
            gids = [ids.setdefault(g, len(ids)) for g in groups]
        return _core.search_membership(masks, k, t, gids)
    if groups is not None:
        raise ValueError("groups are only meaningful in membership mode")
    return _core.search_overlap(masks, k, t)


def solve_set_exact(instance: SetInstance, budget: Budget | None = None) -> PackingSolution | None:
    chosen = search_items(instance.sets, instance.k, instance.t, instance.mode, budget=budget)
    if chosen is None:
        return None
    return PackingSolution(sets=tuple(instance.sets[i] for i in chosen))


def graph_items(instance: GraphInstance, budget: Budget | None = None
                ) -> tuple[list[Subgraph], list[tuple], list[Hashable] | None, str]:
    """Candidate subgraphs, the object each one occupies, distinctness groups, mode."""
    variant = instance.variant
    family = instance.family
    if variant == P2_MEMBERSHIP:
        family = GraphFamily((complete_graph(2),))
    cat = enumerate_subgraphs(instance.g, family, instance.induced, budget)
    entries = list(cat.entries)
    groups: list[Hashable] | None = None
    if variant in (VERTEX_MEMBERSHIP, INDUCED_MEMBERSHIP, P2_MEMBERSHIP):
        entries = list(dedupe_by_vertex_set(cat).entries)
    elif variant in (VERTEX_MEMBERSHIP_ISV, EDGE_MEMBERSHIP):
        groups = [sg.edges for sg in entries]
    elif variant == EDGE_MEMBERSHIP_NISV:
        groups = [sg.vertices for sg in entries]
    objects = [sg.edges if instance.on_edges else sg.vertices for sg in entries]
    mode = MEMBERSHIP if instance.is_membership else "overlap"
    return entries, objects, groups, mode


def solve_graph_exact(instance: GraphInstance, budget: Budget | None = None) -> PackingSolution | None:
    entries, objects, groups, mode = graph_items(instance, budget)
    chosen = search_items(objects, instance.k, instance.t, mode, groups, budget)
    if chosen is None:
        return None
    return PackingSolution(subgraphs=tuple(entries[i] for i in chosen))


def decide(instance: SetInstance | GraphInstance, budget: Budget | None = None) -> bool:
    if isinstance(instance, SetInstance):
        return solve_set_exact(instance, budget) is not None
    return solve_graph_exact(instance, budget) is not None
