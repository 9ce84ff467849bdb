"""Maximum-cardinality matching: Hopcroft-Karp for bipartite graphs and
Edmonds' blossom algorithm for general graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable

from opk.model import Graph


@dataclass(frozen=True)
class ConflictBipartite:
    """Bipartite graph with labelled sides; ``edges`` holds index pairs (left, right)."""

    left: tuple[Hashable, ...]
    right: tuple[Hashable, ...]
    edges: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.left]
        for a, b in self.edges:
            adj[a].append(b)
        return [sorted(set(row)) for row in adj]


def hopcroft_karp(n_left: int, n_right: int, adj: list[list[int]]) -> list[int]:
    """Return ``match_left`` where entry ``i`` is the right partner of ``i`` or -1."""
    INF = float("inf")
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0.0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return match_l


def bipartite_max_matching(b: ConflictBipartite) -> list[tuple[Hashable, Hashable]]:
    match_l = hopcroft_karp(len(b.left), len(b.right), b.adjacency())
    return [(b.left[i], b.right[j]) for i, j in enumerate(match_l) if j != -1]


def _blossom(n: int, adj: list[list[int]]) -> list[int]:
    match = [-1] * n
    parent = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def find_path(root: int) -> int:
        nonlocal base
        used = [False] * n
        parent[:] = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])

        def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    # greedy start keeps the number of augmentation phases small
    for u in range(n):
        if match[u] == -1:
            for v in adj[u]:
                if match[v] == -1:
                    match[u], match[v] = v, u
                    break
    for root in range(n):
        if match[root] != -1:
            continue
        v = find_path(root)
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v], match[pv] = pv, v
            v = ppv
    return match


def general_max_matching(g: Graph) -> list[tuple[int, int]]:
    """Maximum matching of ``g`` as sorted ``(u, v)`` pairs with ``u < v``."""
    adj = [sorted(a) for a in g.adjacency()]
    match = _blossom(g.n, adj)
    return [(u, v) for u, v in enumerate(match) if v != -1 and u < v]


def is_matching(g: Graph, pairs: list[tuple[int, int]]) -> bool:
    seen: set[int] = set()
    for u, v in pairs:
        if not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def has_augmenting_path(g: Graph, pairs: list[tuple[int, int]]) -> bool:
    """Exhaustive search for an augmenting path; meant for small certificates."""
    mate = {}
    for u, v in pairs:
        mate[u], mate[v] = v, u
    adj = g.adjacency()
    free = [v for v in range(g.n) if v not in mate]

    def walk(v: int, visited: set[int]) -> bool:
        # at v (reached by an unmatched edge or as the start), leave via unmatched edges
        for w in adj[v]:
            if w in visited or mate.get(v) == w:
                continue
            if w not in mate:
                return True
            x = mate[w]
            if x in visited:
                continue
            visited |= {w, x}
            if walk(x, visited):
                return True
            visited -= {w, x}
        return False

    return any(walk(s, {s}) for s in free)
