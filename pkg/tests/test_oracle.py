from itertools import combinations

import pytest

from conftest import example_instance, vid
from opk.config import Budget, BudgetExceeded
from opk.generators import random_set_instance, stream
from opk.model import (
    MEMBERSHIP,
    OVERLAP,
    VERTEX_MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    Graph,
    GraphFamily,
    GraphInstance,
    PackingSolution,
    SetInstance,
    check_graph_solution,
    complete_graph,
    cycle_graph,
    set_solution_violation,
)
from opk.oracle import decide, solve_graph_exact, solve_set_exact


def naive(inst: SetInstance) -> bool:
    for combo in combinations(inst.sets, inst.k):
        if set_solution_violation(inst, PackingSolution(sets=combo)) is None:
            return True
    return inst.k == 0


def test_example_witness():
    inst = example_instance(t=2)
    sol = solve_set_exact(inst)
    assert sol is not None and len(sol) == 2
    assert set_solution_violation(inst, sol) is None


def test_k_zero_and_pigeonhole():
    inst = example_instance()
    assert solve_set_exact(inst.with_(k=0)) == PackingSolution(sets=())
    assert solve_set_exact(inst.with_(k=len(inst.sets) + 1)) is None


@pytest.mark.parametrize("mode", [OVERLAP, MEMBERSHIP])
@pytest.mark.parametrize("seed", range(40))
def test_against_naive_enumeration(mode, seed):
    inst = random_set_instance(stream(seed, 17), mode, max_n=8, max_sets=10)
    sol = solve_set_exact(inst)
    assert (sol is not None) == naive(inst)
    if sol is not None:
        assert set_solution_violation(inst, sol) is None


def test_isv_example(demo_graph):
    fam = GraphFamily((cycle_graph(4), complete_graph(4)))
    inst = GraphInstance(demo_graph, fam, 3, 3, VERTEX_MEMBERSHIP_ISV)
    sol = solve_graph_exact(inst)
    assert sol is not None and check_graph_solution(inst, sol)
    assert sum(sg.vertices == tuple(sorted(vid(x) for x in "bcef"))
               for sg in sol.subgraphs) >= 2


def test_empty_graph_no():
    inst = GraphInstance(Graph(3, ()), GraphFamily((complete_graph(2),)), 1, 1, VERTEX_MEMBERSHIP)
    assert solve_graph_exact(inst) is None


def test_k2_with_edge_yes():
    g = Graph.from_edges(3, [(0, 2)])
    inst = GraphInstance(g, GraphFamily((complete_graph(2),)), 1, 1, VERTEX_MEMBERSHIP)
    assert decide(inst)


def test_budget_guard():
    sets = tuple((i, i + 1) for i in range(40))
    inst = SetInstance(tuple(range(41)), sets, 2, 1, 10, OVERLAP)
    with pytest.raises(BudgetExceeded) as info:
        decide(inst, Budget(oracle_sets=24, oracle_k=5))
    assert info.value.parameter == "k"
    with pytest.raises(BudgetExceeded):
        decide(inst, Budget(oracle_items=10))
    assert decide(inst, Budget(oracle_k=10))
