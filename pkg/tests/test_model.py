import json

import pytest

from conftest import edge, example_instance, membership_example, subgraph, vid
from opk.config import Budget, BudgetExceeded, parse_budget
from opk.model import (
    EDGE_MEMBERSHIP,
    MEMBERSHIP,
    OVERLAP,
    VERTEX_MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    CLIQUE_EDGE_OVERLAP,
    Graph,
    GraphFamily,
    GraphInstance,
    InstanceError,
    PackingSolution,
    SetInstance,
    check_graph_solution,
    check_set_membership,
    check_set_overlap,
    complete_graph,
    cycle_graph,
    instance_from_json,
    path_graph,
    set_solution_violation,
    solution_from_json,
)


def sets(*names):
    return PackingSolution(sets=tuple(tuple(s) for s in names))


class TestSetInstance:
    def test_canonical_form(self):
        inst = SetInstance(("c", "a", "b"), (("b", "a"), ("c",)), 2, 0, 1)
        assert inst.universe == ("a", "b", "c")
        assert inst.sets == (("a", "b"), ("c",))

    def test_rejects_duplicates(self):
        with pytest.raises(InstanceError):
            SetInstance((1, 2), ((1, 2), (2, 1)), 2, 0, 1)
        with pytest.raises(InstanceError):
            SetInstance((1, 1, 2), ((1, 2),), 2, 0, 1)

    def test_rejects_foreign_elements_and_sizes(self):
        with pytest.raises(InstanceError):
            SetInstance((1, 2), ((1, 3),), 2, 0, 1)
        with pytest.raises(InstanceError):
            SetInstance((1, 2, 3), ((1, 2, 3),), 2, 0, 1)

    def test_t_ranges(self):
        with pytest.raises(InstanceError):
            SetInstance((1, 2), ((1, 2),), 2, 2, 1, OVERLAP)
        with pytest.raises(InstanceError):
            SetInstance((1, 2), ((1, 2),), 2, 0, 1, MEMBERSHIP)

    def test_mixed_labels_sort(self):
        inst = SetInstance((3, "a", 1), ((3, "a"), (1,)), 2, 0, 1)
        assert len(inst.universe) == 3


class TestChecks:
    def test_overlap_example(self):
        inst = example_instance(t=2)
        assert check_set_overlap(inst, sets("bcde", "efgi"))

    def test_empty_solution_k0(self):
        inst = example_instance().with_(k=0)
        assert check_set_overlap(inst, PackingSolution(sets=()))

    def test_identical_sets_rejected(self):
        inst = example_instance(t=2)
        assert not check_set_overlap(inst, sets("bcde", "bcde"))

    def test_membership_examples(self):
        inst = membership_example()
        assert check_set_membership(inst, sets("abcd", "bcef"))
        assert not check_set_membership(inst.with_(k=3), sets("abcd", "bcef", "bcgh"))

    def test_single_set_membership(self):
        inst = SetInstance((1, 2), ((1, 2),), 2, 1, 1, MEMBERSHIP)
        assert check_set_membership(inst, PackingSolution(sets=((1, 2),)))

    def test_diagnostics(self):
        inst = example_instance(t=1)
        msg = set_solution_violation(inst, sets("abce", "bcde"))
        assert "#0" in msg and "#1" in msg
        assert "not in the instance" in set_solution_violation(inst, sets("abcd", "bcde"))
        assert "need k" in set_solution_violation(inst, sets("abce"))


class TestGraph:
    def test_normalises_edges(self):
        g = Graph.from_edges(3, [(1, 0), (2, 1)])
        assert g.edges == ((0, 1), (1, 2))
        assert g.degrees() == [1, 2, 1]

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(InstanceError):
            Graph.from_edges(3, edges)

    def test_induced_keeps_labels(self, demo_graph):
        sub = demo_graph.induced([vid(x) for x in "bcef"])
        assert sub.m == 6
        assert sub.labels == ("b", "c", "e", "f")

    def test_family_parameters(self):
        fam = GraphFamily((cycle_graph(4), complete_graph(4)))
        assert (fam.r_h, fam.m_h) == (4, 6)
        assert fam.is_cliques() is False
        assert GraphFamily((complete_graph(3),)).is_cliques()

    def test_clique_variant_requires_cliques(self):
        with pytest.raises(InstanceError):
            GraphInstance(complete_graph(4), GraphFamily((path_graph(3),)), 1, 1,
                          CLIQUE_EDGE_OVERLAP)


class TestGraphChecks:
    def test_k4_plus_c4_membership(self, demo_graph):
        fam = GraphFamily((cycle_graph(4), complete_graph(4)))
        inst = GraphInstance(demo_graph, fam, 2, 2, VERTEX_MEMBERSHIP)
        k4 = subgraph("bcef", ["bc", "be", "bf", "ce", "cf", "ef"])
        c4 = subgraph("abcd", ["ab", "bc", "cd", "ad"])
        assert check_graph_solution(inst, PackingSolution(subgraphs=(k4, c4)))

    def test_equal_vertex_sets_rejected(self, demo_graph):
        fam = GraphFamily((cycle_graph(4), complete_graph(4)))
        inst = GraphInstance(demo_graph, fam, 2, 2, VERTEX_MEMBERSHIP)
        k4 = subgraph("bcef", ["bc", "be", "bf", "ce", "cf", "ef"])
        c4 = subgraph("bcef", ["be", "ef", "cf", "bc"])
        assert not check_graph_solution(inst, PackingSolution(subgraphs=(k4, c4)))
        isv = inst.with_(variant=VERTEX_MEMBERSHIP_ISV)
        assert check_graph_solution(isv, PackingSolution(subgraphs=(k4, c4)))

    def test_empty_solution(self, demo_graph):
        inst = GraphInstance(demo_graph, GraphFamily((cycle_graph(4),)), 1, 0, EDGE_MEMBERSHIP)
        assert check_graph_solution(inst, PackingSolution(subgraphs=()))

    def test_wrong_shape_rejected(self, demo_graph):
        inst = GraphInstance(demo_graph, GraphFamily((complete_graph(3),)), 1, 1, VERTEX_MEMBERSHIP)
        path = subgraph("abc", ["ab", "bc"])
        assert not check_graph_solution(inst, PackingSolution(subgraphs=(path,)))

    def test_edge_outside_graph(self, demo_graph):
        inst = GraphInstance(demo_graph, GraphFamily((path_graph(2),)), 1, 1, VERTEX_MEMBERSHIP)
        bad = PackingSolution(subgraphs=((
            (vid("a"), vid("h")), (edge("ah"),)),))
        assert not check_graph_solution(inst, bad)


class TestJson:
    def test_set_round_trip(self):
        inst = example_instance()
        doc = json.loads(json.dumps(inst.to_json()))
        assert instance_from_json(doc) == inst

    def test_graph_round_trip(self, demo_graph):
        inst = GraphInstance(demo_graph, GraphFamily((cycle_graph(4), complete_graph(4))),
                             2, 3, VERTEX_MEMBERSHIP)
        assert instance_from_json(json.loads(json.dumps(inst.to_json()))) == inst

    def test_p2_family_default(self):
        doc = {"kind": "graph", "n": 2, "edges": [[0, 1]], "t": 1, "k": 1,
               "variant": "p2-membership"}
        inst = instance_from_json(doc)
        assert inst.family.members[0].m == 1

    @pytest.mark.parametrize("doc", [{}, {"kind": "set"}, {"kind": "nope"},
                                     {"kind": "set", "universe": [1], "sets": [[2]],
                                      "r": 1, "t": 0, "k": 1}])
    def test_malformed(self, doc):
        with pytest.raises(InstanceError):
            instance_from_json(doc)

    def test_solution_round_trip(self):
        sol = sets("abce", "efgi")
        assert solution_from_json(sol.to_json()) == sol
        with pytest.raises(InstanceError):
            solution_from_json({"other": 1})


class TestBudget:
    def test_parse(self):
        b = parse_budget("oracle_sets=3, catalog=10")
        assert (b.oracle_sets, b.catalog, b.oracle_k) == (3, 10, Budget().oracle_k)

    @pytest.mark.parametrize("spec", ["nope=1", "oracle_sets", "oracle_sets=x"])
    def test_parse_errors(self, spec):
        with pytest.raises(ValueError):
            parse_budget(spec)

    def test_exception_fields(self):
        exc = BudgetExceeded("items", 9, 3)
        assert (exc.parameter, exc.value, exc.limit) == ("items", 9, 3)
