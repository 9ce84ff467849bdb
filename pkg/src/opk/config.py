"""Enumeration budgets.

Budgets guard every exponential step (exhaustive search, subgraph
enumeration, the membership blow-up). They are plain configuration and can
be overridden from the ``OPK_BUDGET`` environment variable, e.g.
``OPK_BUDGET="oracle_sets=40,catalog=500000"``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, parameter: str, value: int, limit: int):
        self.parameter = parameter
        self.value = value
        self.limit = limit
        super().__init__(f"budget exceeded: {parameter}={value} > {limit}")


@dataclass(frozen=True)
class Budget:
    # exhaustive search is allowed when |sets| <= oracle_sets or k <= oracle_k
    oracle_sets: int = 24
    oracle_k: int = 5
    oracle_items: int = 5000
    # subgraph enumeration: number of partial embeddings explored
    catalog: int = 2_000_000
    # size of the transformed collection in the membership pipelines
    transform: int = 1_000_000

    def replace(self, **changes: int) -> "Budget":
        return dataclasses.replace(self, **changes)


def parse_budget(spec: str, base: Budget | None = None) -> Budget:
    base = base or Budget()
    fields = {f.name for f in dataclasses.fields(Budget)}
    changes: dict[str, int] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or name not in fields:
            raise ValueError(f"bad OPK_BUDGET entry {part!r}")
        changes[name] = int(value)
    return base.replace(**changes)


def get_budget() -> Budget:
    spec = os.environ.get("OPK_BUDGET", "")
    return parse_budget(spec) if spec else Budget()
