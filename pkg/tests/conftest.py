from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from opk.config import Budget
from opk.model import OVERLAP, MEMBERSHIP, Graph, SetInstance, Subgraph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LETTERS = "abcdefgh"
DEMO_EDGES = ["ab", "ad", "bc", "cd", "bg", "gh", "ch", "be", "ef", "cf", "bf", "ce"]


def vid(name: str) -> int:
    return LETTERS.index(name)


def edge(name: str) -> tuple[int, int]:
    u, v = sorted((vid(name[0]), vid(name[1])))
    return (u, v)


def subgraph(vertices: str, edges: list[str]) -> Subgraph:
    return Subgraph.make([vid(v) for v in vertices], [edge(e) for e in edges])


@pytest.fixture
def demo_graph() -> Graph:
    """Eight-vertex host with a K4 on {b,c,e,f} and C4s on {a,b,c,d}, {b,c,g,h}."""
    return Graph.from_edges(8, [edge(e) for e in DEMO_EDGES], list(LETTERS))


EXAMPLE_SETS = ["abce", "bcde", "efgi", "aefi", "egih", "ijnm", "ijmk", "ijml",
                "oqnp", "qprs", "qptu", "qpuv", "qpvw", "qpxy"]
EXAMPLE_R = ["bcde", "efgi", "ijnm", "onpq", "qprs", "qptu", "qpvw", "qpxy"]


def example_instance(t: int = 1) -> SetInstance:
    return SetInstance(tuple("abcdefghijklmnopqrstuvwxy"),
                       tuple(tuple(s) for s in EXAMPLE_SETS), 4, t, 2, OVERLAP)


def membership_example() -> SetInstance:
    return SetInstance(tuple("abcdefgh"), (tuple("abcd"), tuple("bcef"), tuple("bcgh")),
                       4, 2, 2, MEMBERSHIP)


@pytest.fixture
def big_budget() -> Budget:
    return Budget().replace(oracle_k=64, oracle_sets=64)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
