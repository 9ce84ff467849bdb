"""Kernels, oracles and generators for packing problems with overlap."""

from opk.config import Budget, BudgetExceeded, get_budget
from opk.model import (
    Graph,
    GraphFamily,
    GraphInstance,
    InstanceError,
    KernelStats,
    PackingSolution,
    SetInstance,
    Subgraph,
    check_graph_solution,
    check_set_membership,
    check_set_overlap,
)

__all__ = [
    "Budget",
    "BudgetExceeded",
    "Graph",
    "GraphFamily",
    "GraphInstance",
    "InstanceError",
    "KernelStats",
    "PackingSolution",
    "SetInstance",
    "Subgraph",
    "check_graph_solution",
    "check_set_membership",
    "check_set_overlap",
    "get_budget",
]
