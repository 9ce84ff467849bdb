"""One entry point that routes any instance to its kernel."""

from __future__ import annotations

from opk.config import Budget
from opk.membership import (
    kernelize_graph_membership,
    kernelize_graph_membership_isv,
    kernelize_graph_membership_nisv,
    kernelize_set_membership,
)
from opk.model import (
    EDGE_MEMBERSHIP_NISV,
    MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    GraphInstance,
    SetInstance,
)
from opk.overlap import KernelOutcome, kernelize_graph_overlap, kernelize_set_overlap


def kernelize(instance: SetInstance | GraphInstance, budget: Budget | None = None) -> KernelOutcome:
    """Kernelize a set or graph instance.

    For graph instances the reduced graph instance is in ``outcome.graph``.
    """
    if isinstance(instance, SetInstance):
        if instance.mode == MEMBERSHIP:
            return kernelize_set_membership(instance, budget)
        return kernelize_set_overlap(instance)
    if instance.variant == VERTEX_MEMBERSHIP_ISV:
        return kernelize_graph_membership_isv(instance, budget)[1]
    if instance.variant == EDGE_MEMBERSHIP_NISV:
        return kernelize_graph_membership_nisv(instance, budget)[1]
    if instance.is_membership:
        return kernelize_graph_membership(instance, budget)[1]
    return kernelize_graph_overlap(instance, budget)[1]


def reduced_instance(outcome: KernelOutcome) -> SetInstance | GraphInstance | None:
    return outcome.graph if outcome.graph is not None else outcome.reduced
