"""Single-edge packing with t-membership in polynomial time.

A packing of single edges where every vertex lies in at most ``t`` of them is
a subgraph of maximum degree ``t``, so the task is a degree-constrained
subgraph problem. It reduces to maximum matching on a gadget graph:

* vertex ``v`` becomes ``b(v)`` stub nodes;
* edge ``uv`` becomes two nodes ``e_u`` and ``e_v`` joined by an internal
  edge, with ``e_u`` adjacent to every stub of ``u`` and ``e_v`` to every
  stub of ``v``.

A maximum matching of the gadget has size ``|E| + d`` where ``d`` is the
largest degree-constrained edge count. The chosen edges are those whose two
gadget nodes are both matched into stubs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from opk.matching import general_max_matching
from opk.model import Edge, Graph, PackingSolution, Subgraph

DegreeConstraint = Mapping[int, int]


@dataclass(frozen=True)
class Gadget:
    graph: Graph
    edge_nodes: tuple[tuple[int, int], ...]  # (e_u, e_v) per host edge, host edge order
    stubs: tuple[tuple[int, ...], ...]  # stub nodes per host vertex

    @property
    def n_vertices(self) -> int:
        return self.graph.n

    @property
    def n_edges(self) -> int:
        return self.graph.m


def build_gadget(g: Graph, b: DegreeConstraint) -> Gadget:
    for v in range(g.n):
        if b.get(v, 0) < 0:
            raise ValueError(f"negative degree bound at vertex {v}")
    node = 0
    edge_nodes = []
    for _ in g.edges:
        edge_nodes.append((node, node + 1))
        node += 2
    stubs = []
    for v in range(g.n):
        stubs.append(tuple(range(node, node + b.get(v, 0))))
        node += b.get(v, 0)
    edges: list[Edge] = []
    for (u, v), (eu, ev) in zip(g.edges, edge_nodes):
        edges.append((eu, ev))
        edges.extend((eu, s) for s in stubs[u])
        edges.extend((ev, s) for s in stubs[v])
    gadget = Gadget(Graph.from_edges(node, edges), tuple(edge_nodes), tuple(stubs))
    total_b = sum(b.get(v, 0) for v in range(g.n))
    assert gadget.n_vertices == 2 * g.m + total_b
    assert gadget.n_edges == g.m + sum(b.get(u, 0) + b.get(v, 0) for u, v in g.edges)
    return gadget


def solve_degree_constrained(g: Graph, b: DegreeConstraint) -> list[Edge]:
    """Largest edge set in which every vertex ``v`` meets at most ``b[v]`` edges."""
    gadget = build_gadget(g, b)
    mate: dict[int, int] = {}
    for x, y in general_max_matching(gadget.graph):
        mate[x], mate[y] = y, x
    stub_nodes = {s for row in gadget.stubs for s in row}
    chosen = [e for e, (eu, ev) in zip(g.edges, gadget.edge_nodes)
              if mate.get(eu) in stub_nodes and mate.get(ev) in stub_nodes]
    assert len(mate) // 2 == g.m + len(chosen)
    return chosen


def solve_p2_membership(g: Graph, t: int, k: int) -> PackingSolution | None:
    if t < 1:
        raise ValueError("t must be >= 1")
    if k <= 0:
        return PackingSolution(subgraphs=())
    best = solve_degree_constrained(g, {v: t for v in range(g.n)})
    if len(best) < k:
        return None
    return PackingSolution(subgraphs=tuple(Subgraph.make(e, [e]) for e in best[:k]))
