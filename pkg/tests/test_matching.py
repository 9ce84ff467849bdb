from itertools import combinations

import networkx as nx
import pytest

from opk.generators import random_graph, stream
from opk.matching import (
    ConflictBipartite,
    bipartite_max_matching,
    general_max_matching,
    has_augmenting_path,
    hopcroft_karp,
    is_matching,
)
from opk.model import Graph, complete_graph, cycle_graph, path_graph
from opk.overlap import build_conflict_bipartite


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def brute_matching_size(g: Graph) -> int:
    for size in range(g.n // 2, 0, -1):
        for es in combinations(g.edges, size):
            if len({v for e in es for v in e}) == 2 * size:
                return size
    return 0


def test_example_bipartite():
    sets = [tuple(sorted(s)) for s in ["bcea", "eifa", "egih", "ijmk", "ijml"]]
    b = build_conflict_bipartite(list("ahkl"), sets)
    assert b.right == (("b", "c", "e"), ("e", "f", "i"), ("e", "g", "i"), ("i", "j", "m"))
    pairs = bipartite_max_matching(b)
    # a is the only neighbour of both {b,c,e} and {e,f,i}
    assert len(pairs) == 3
    matched = {o for o, _ in pairs}
    assert "a" in matched and "h" in matched
    assert len(matched & {"k", "l"}) == 1


def test_empty_bipartite():
    assert bipartite_max_matching(ConflictBipartite((), (), ())) == []


def test_k33():
    adj = [[0, 1, 2]] * 3
    mate = hopcroft_karp(3, 3, adj)
    assert sum(m >= 0 for m in mate) == 3


@pytest.mark.parametrize("seed", range(30))
def test_hopcroft_karp_vs_networkx(seed):
    rng = stream(seed, 5)
    nl, nr = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    adj = [[j for j in range(nr) if rng.random() < 0.3] for _ in range(nl)]
    mate = hopcroft_karp(nl, nr, adj)
    ref = nx.Graph()
    ref.add_nodes_from(range(nl), bipartite=0)
    ref.add_nodes_from(range(nl, nl + nr), bipartite=1)
    ref.add_edges_from((i, nl + j) for i in range(nl) for j in adj[i])
    expected = len(nx.bipartite.maximum_matching(ref, top_nodes=range(nl))) // 2
    assert sum(m >= 0 for m in mate) == expected
    for i, j in enumerate(mate):
        if j >= 0:
            assert j in adj[i]


@pytest.mark.parametrize("g,size", [(complete_graph(3), 1), (path_graph(4), 2),
                                    (petersen(), 5), (Graph(0, ()), 0), (cycle_graph(7), 3)])
def test_general_known(g, size):
    pairs = general_max_matching(g)
    assert is_matching(g, pairs) and len(pairs) == size


def test_petersen_brute_force():
    assert brute_matching_size(petersen()) == 5


@pytest.mark.parametrize("seed", range(60))
def test_general_vs_networkx(seed):
    rng = stream(seed, 6)
    g = random_graph(rng, int(rng.integers(1, 14)), float(rng.uniform(0.1, 0.7)))
    pairs = general_max_matching(g)
    assert is_matching(g, pairs)
    assert not has_augmenting_path(g, pairs)
    ref = nx.Graph()
    ref.add_nodes_from(range(g.n))
    ref.add_edges_from(g.edges)
    assert len(pairs) == len(nx.max_weight_matching(ref, maxcardinality=True))


def test_augmenting_path_certificate():
    g = path_graph(4)
    assert has_augmenting_path(g, [(1, 2)])
    assert not has_augmenting_path(g, [(0, 1), (2, 3)])
    assert not is_matching(g, [(0, 1), (1, 2)])
