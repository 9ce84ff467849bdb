"""Subgraph enumeration for finite pattern families.

The matcher is a plain backtracking search. Pattern vertices are visited in
BFS order so every vertex after the first has an already-mapped neighbour,
host candidates are filtered by degree, and mutually interchangeable pattern
vertices (twins) are forced to take increasing images. Any remaining
automorphic duplicates collapse when images are collected as
``(vertex_set, edge_set)`` pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from opk.config import Budget, BudgetExceeded, get_budget
from opk.model import Graph, GraphFamily, Subgraph


def _bfs_order(h: Graph, adj: list[set[int]]) -> list[int]:
    order: list[int] = []
    seen = [False] * h.n
    # start each component at its highest-degree vertex: fewer candidates early
    for root in sorted(range(h.n), key=lambda v: (-len(adj[v]), v)):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(adj[v], key=lambda x: (-len(adj[x]), x)):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def _twin_predecessor(h: Graph, adj: list[set[int]]) -> list[int]:
    """For each pattern vertex, a twin that must receive a smaller image (or -1)."""
    classes: list[list[int]] = []
    for v in range(h.n):
        for cls in classes:
            if all(adj[v] - {w} == adj[w] - {v} for w in cls):
                cls.append(v)
                break
        else:
            classes.append([v])
    pred = [-1] * h.n
    for cls in classes:
        for a, b in zip(cls, cls[1:]):
            pred[b] = a
    return pred


def iter_embeddings(pattern: Graph, g: Graph, induced: bool = False,
                    g_adj: list[set[int]] | None = None) -> Iterator[dict[int, int]]:
    """Yield injective maps pattern -> host, one per twin-class ordering."""
    if pattern.n == 0 or pattern.n > g.n or pattern.m > g.m:
        return
    p_adj = pattern.adjacency()
    g_adj = g_adj if g_adj is not None else g.adjacency()
    order = _bfs_order(pattern, p_adj)
    pred = _twin_predecessor(pattern, p_adj)
    position = {v: i for i, v in enumerate(order)}
    # twin constraint only usable once the predecessor is mapped
    pred_ok = [pred[v] if pred[v] >= 0 and position[pred[v]] < position[v] else -1
               for v in range(pattern.n)]
    succ_first = [[] for _ in range(pattern.n)]
    for v in range(pattern.n):
        p = pred[v]
        if p >= 0 and position[p] > position[v]:
            succ_first[p].append(v)
    p_deg = [len(a) for a in p_adj]
    g_deg = [len(a) for a in g_adj]
    earlier = [[w for w in p_adj[v] if position[w] < position[v]] for v in order]
    earlier_non = [[w for w in order[:i] if w not in p_adj[v]] for i, v in enumerate(order)]
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> Iterator[dict[int, int]]:
        if i == len(order):
            yield dict(mapping)
            return
        v = order[i]
        anchors = earlier[i]
        if anchors:
            cands = set(g_adj[mapping[anchors[0]]])
            for w in anchors[1:]:
                cands &= g_adj[mapping[w]]
        else:
            cands = set(range(g.n))
        lo = mapping[pred_ok[v]] if pred_ok[v] >= 0 else -1
        for x in sorted(cands):
            if x in used or x <= lo or g_deg[x] < p_deg[v]:
                continue
            if any(mapping[s] < x for s in succ_first[v] if s in mapping):
                continue
            if induced and any(mapping[w] in g_adj[x] for w in earlier_non[i]):
                continue
            mapping[v] = x
            used.add(x)
            yield from extend(i + 1)
            del mapping[v]
            used.discard(x)

    yield from extend(0)


def image(pattern: Graph, mapping: dict[int, int]) -> Subgraph:
    return Subgraph.make(mapping.values(),
                         ((mapping[u], mapping[v]) for u, v in pattern.edges))


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or a.m != b.m or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    if a.n == 0:
        return True
    return next(iter_embeddings(a, b), None) is not None


@dataclass(frozen=True)
class SubgraphCatalog:
    entries: tuple[Subgraph, ...]
    deduped: bool = False

    @property
    def collection_E(self) -> tuple[tuple, ...]:
        return derive_collections(self)[0]

    @property
    def collection_V(self) -> tuple[tuple, ...]:
        return derive_collections(self)[1]

    def __len__(self) -> int:
        return len(self.entries)


def enumerate_subgraphs(g: Graph, family: GraphFamily, induced: bool,
                        budget: Budget | None = None) -> SubgraphCatalog:
    """All subgraphs of ``g`` isomorphic to a family member, sorted by (V, E)."""
    budget = budget or get_budget()
    limit = budget.catalog
    found: set[Subgraph] = set()
    g_adj = g.adjacency()
    steps = 0
    for h in family.members:
        for mapping in iter_embeddings(h, g, induced, g_adj):
            steps += 1
            if steps > 4 * limit:
                raise BudgetExceeded("catalog", steps, 4 * limit)
            found.add(image(h, mapping))
            if len(found) > limit:
                raise BudgetExceeded("catalog", len(found), limit)
    return SubgraphCatalog(tuple(sorted(found)))


def dedupe_by_vertex_set(cat: SubgraphCatalog) -> SubgraphCatalog:
    """Keep one entry per vertex set: the lexicographically smallest edge set."""
    best: dict[tuple, Subgraph] = {}
    for sg in cat.entries:
        cur = best.get(sg.vertices)
        if cur is None or sg.edges < cur.edges:
            best[sg.vertices] = sg
    return SubgraphCatalog(tuple(sorted(best.values())), deduped=True)


def derive_collections(cat: SubgraphCatalog) -> tuple[tuple[tuple, ...], tuple[tuple, ...]]:
    edge_sets = tuple(sorted({sg.edges for sg in cat.entries}))
    vertex_sets = tuple(sorted({sg.vertices for sg in cat.entries}))
    return edge_sets, vertex_sets
