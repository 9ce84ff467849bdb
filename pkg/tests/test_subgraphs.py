from itertools import combinations, permutations

import pytest

from conftest import subgraph
from opk.config import Budget, BudgetExceeded
from opk.generators import random_graph, stream
from opk.model import Graph, GraphFamily, complete_graph, cycle_graph, path_graph, star_graph
from opk.subgraphs import (
    SubgraphCatalog,
    dedupe_by_vertex_set,
    derive_collections,
    enumerate_subgraphs,
    is_isomorphic,
    iter_embeddings,
)

C4 = GraphFamily((cycle_graph(4),))
C4K4 = GraphFamily((cycle_graph(4), complete_graph(4)))


def brute_force(g: Graph, family: GraphFamily, induced: bool) -> set:
    found = set()
    for h in family.members:
        for vs in combinations(range(g.n), h.n):
            for perm in permutations(vs):
                img = {tuple(sorted((perm[a], perm[b]))) for a, b in h.edges}
                if not all(g.has_edge(*e) for e in img):
                    continue
                if induced:
                    full = {e for e in g.edges if e[0] in vs and e[1] in vs}
                    if img != full:
                        continue
                found.add((tuple(sorted(vs)), tuple(sorted(img))))
    return found


def test_demo_c4_catalog(demo_graph):
    cat = enumerate_subgraphs(demo_graph, C4, induced=False)
    entries = set(cat.entries)
    assert subgraph("abcd", ["ab", "bc", "cd", "ad"]) in entries
    assert subgraph("bcgh", ["bc", "bg", "gh", "ch"]) in entries
    on_bcef = [sg for sg in entries if sg.vertices == subgraph("bcef", []).vertices]
    assert len(on_bcef) == 3
    assert len(entries) == 5


def test_k1_one_entry_per_vertex(demo_graph):
    cat = enumerate_subgraphs(demo_graph, GraphFamily((Graph(1, ()),)), induced=False)
    assert len(cat.entries) == demo_graph.n


def test_triangle_free_has_no_triangles():
    cat = enumerate_subgraphs(cycle_graph(6), GraphFamily((complete_graph(3),)), induced=False)
    assert cat.entries == ()


def test_dedupe_keeps_one_per_vertex_set(demo_graph):
    cat = enumerate_subgraphs(demo_graph, C4K4, induced=False)
    deduped = dedupe_by_vertex_set(cat)
    assert len(deduped.entries) == 3
    assert dedupe_by_vertex_set(deduped).entries == deduped.entries
    assert dedupe_by_vertex_set(SubgraphCatalog((), False)).entries == ()


def test_demo_collections(demo_graph):
    coll_e, _ = derive_collections(enumerate_subgraphs(demo_graph, C4K4, induced=False))
    # three C4s and the K4 on {b,c,e,f}, plus one C4 each on {a,b,c,d} and {b,c,g,h}
    assert len(coll_e) == 6
    _, coll_v = derive_collections(enumerate_subgraphs(demo_graph, C4, induced=False))
    assert len(coll_v) == 3


def test_single_entry_collections():
    cat = enumerate_subgraphs(complete_graph(3), GraphFamily((complete_graph(3),)), False)
    coll_e, coll_v = derive_collections(cat)
    assert len(coll_e) == 1 and len(coll_v) == 1


def test_induced_excludes_chords(demo_graph):
    cat = enumerate_subgraphs(demo_graph, C4, induced=True)
    assert {sg.vertices for sg in cat.entries} == {
        subgraph("abcd", []).vertices, subgraph("bcgh", []).vertices}


@pytest.mark.parametrize("seed", range(40))
def test_matches_brute_force(seed):
    rng = stream(seed, 99)
    g = random_graph(rng, int(rng.integers(3, 8)), float(rng.uniform(0.2, 0.8)))
    family = [GraphFamily((path_graph(3),)), C4K4, GraphFamily((star_graph(3),)),
              GraphFamily((complete_graph(3), path_graph(4)))][seed % 4]
    for induced in (False, True):
        got = {(sg.vertices, sg.edges) for sg in enumerate_subgraphs(g, family, induced).entries}
        assert got == brute_force(g, family, induced)


def test_embeddings_respect_adjacency():
    g = complete_graph(4)
    maps = list(iter_embeddings(path_graph(3), g))
    assert maps
    for m in maps:
        assert g.has_edge(m[0], m[1]) and g.has_edge(m[1], m[2])


def test_isomorphism():
    assert is_isomorphic(cycle_graph(4), Graph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]))
    assert not is_isomorphic(cycle_graph(4), path_graph(4))
    assert not is_isomorphic(star_graph(3), path_graph(4))


def test_catalog_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_subgraphs(complete_graph(9), GraphFamily((complete_graph(4),)), False,
                            Budget(catalog=50))
