"""Instance generators from the hardness reductions.

Each lift returns the new graph, the new target and a provenance list whose
entry ``i`` names what new vertex ``i`` stands for. Original vertices keep
their indices; new vertices are appended in construction order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from opk.model import Edge, Graph, InstanceError


@dataclass(frozen=True)
class Lift:
    graph: Graph
    k: int
    provenance: tuple[Hashable, ...]


def lift_p3_membership(g: Graph, k: int, t: int) -> Lift:
    """From 3-vertex path packing with ``t``-membership to ``t+1``-membership.

    Vertices are padded to a multiple of ``t+1`` and split into consecutive
    groups. Group ``q`` gets a hub ``u_2q`` adjacent to all its members and a
    pendant ``u_2q+1`` hanging off the hub. The target grows by the padded
    vertex count.
    """
    if t < 1:
        raise InstanceError("t must be >= 1")
    n_pad = -(-max(g.n, 1) // (t + 1)) * (t + 1)
    provenance: list[Hashable] = [("v", v) for v in range(g.n)]
    provenance += [("pad", v) for v in range(g.n, n_pad)]
    edges: list[Edge] = list(g.edges)
    groups = n_pad // (t + 1)
    base = n_pad
    for q in range(groups):
        hub, pendant = base + 2 * q, base + 2 * q + 1
        for j in range(t + 1):
            edges.append((q * (t + 1) + j, hub))
        edges.append((hub, pendant))
        provenance += [("hub", q), ("pendant", q)]
    lifted = Graph.from_edges(n_pad + 2 * groups, edges)
    return Lift(lifted, n_pad + k, tuple(provenance))


def lift_c3_edge_membership(g: Graph, k: int, t: int) -> Lift:
    """From triangle edge-packing with ``t``-membership to ``t+1``-membership.

    Every edge ``uv`` gets a new vertex adjacent to ``u`` and ``v``, closing one
    fresh triangle per edge.
    """
    if t < 1:
        raise InstanceError("t must be >= 1")
    edges: list[Edge] = list(g.edges)
    provenance: list[Hashable] = [("v", v) for v in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        w = g.n + i
        edges += [(u, w), (v, w)]
        provenance.append(("edge", (u, v)))
    return Lift(Graph.from_edges(g.n + g.m, edges), k + g.m, tuple(provenance))


def star_size(t: int) -> int:
    return max(5, t - 1)


@dataclass(frozen=True)
class StarGadget:
    graph: Graph
    pattern: Graph
    provenance: tuple[Hashable, ...]


def _attach_stars(n: int, edges: list[Edge], anchors: range, s: int,
                  provenance: list[Hashable]) -> int:
    node = n
    for v in anchors:
        centre = node
        edges.append((v, centre))
        provenance.append(("centre", v))
        for leaf in range(s):
            edges.append((centre, centre + 1 + leaf))
            provenance.append(("leaf", v, leaf))
        node += s + 1
    return node


def star_overlap_gadget(g: Graph, t: int) -> StarGadget:
    """Pad every vertex with a bridged star so only host triangles can carry a pattern."""
    if t < 0:
        raise InstanceError("t must be >= 0")
    if g.n and max(g.degrees()) > 4:
        raise InstanceError("star gadget needs a host graph of maximum degree 4")
    s = star_size(t)
    edges: list[Edge] = list(g.edges)
    provenance: list[Hashable] = [("v", v) for v in range(g.n)]
    total = _attach_stars(g.n, edges, range(g.n), s, provenance)
    host = Graph.from_edges(total, edges)
    p_edges: list[Edge] = [(0, 1), (1, 2), (0, 2)]
    p_total = _attach_stars(3, p_edges, range(3), s, [])
    return StarGadget(host, Graph.from_edges(p_total, p_edges), tuple(provenance))
