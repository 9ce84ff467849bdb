"""Domain types, JSON formats and solution validators.

Sets are stored canonically: every set is a sorted tuple and the collection
is sorted lexicographically. Graphs use dense 0-based vertex indices with an
optional sidecar of external labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence

OVERLAP = "overlap"
MEMBERSHIP = "membership"

VERTEX_MEMBERSHIP = "vertex-membership"
VERTEX_MEMBERSHIP_ISV = "vertex-membership-ISV"
INDUCED_MEMBERSHIP = "induced-membership"
EDGE_MEMBERSHIP = "edge-membership"
EDGE_MEMBERSHIP_NISV = "edge-membership-NISV"
VERTEX_OVERLAP = "vertex-overlap"
INDUCED_OVERLAP = "induced-overlap"
EDGE_OVERLAP = "edge-overlap"
CLIQUE_EDGE_OVERLAP = "clique-edge-overlap"
P2_MEMBERSHIP = "p2-membership"

MEMBERSHIP_VARIANTS = (
    VERTEX_MEMBERSHIP,
    VERTEX_MEMBERSHIP_ISV,
    INDUCED_MEMBERSHIP,
    EDGE_MEMBERSHIP,
    EDGE_MEMBERSHIP_NISV,
)
OVERLAP_VARIANTS = (VERTEX_OVERLAP, INDUCED_OVERLAP, EDGE_OVERLAP, CLIQUE_EDGE_OVERLAP)
GRAPH_VARIANTS = MEMBERSHIP_VARIANTS + OVERLAP_VARIANTS
EDGE_VARIANTS = (EDGE_MEMBERSHIP, EDGE_MEMBERSHIP_NISV, EDGE_OVERLAP, CLIQUE_EDGE_OVERLAP)
INDUCED_VARIANTS = (INDUCED_MEMBERSHIP, INDUCED_OVERLAP)


class InstanceError(ValueError):
    """Malformed or inconsistent instance, solution or JSON document."""


Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[Hashable, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InstanceError("vertex count must be non-negative")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise InstanceError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u}, {v}) outside [0, {self.n})")
            e = _norm_edge(u, v)
            if e in seen:
                raise InstanceError(f"multi-edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise InstanceError("labels must be n distinct values")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   labels: Sequence[Hashable] | None = None) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges),
                   None if labels is None else tuple(labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        # cached on first use; the dataclass is frozen so bypass __setattr__
        cached = self.__dict__.get("_edge_set")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", cached)
        return cached

    def label(self, v: int) -> Hashable:
        return v if self.labels is None else self.labels[v]

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled densely; labels carry the originals."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(keep), edges, [self.label(v) for v in keep])

    def isolated(self) -> list[int]:
        deg = self.degrees()
        return [v for v in range(self.n) if deg[v] == 0]

    def without_isolated(self) -> "Graph":
        deg = self.degrees()
        return self.induced(v for v in range(self.n) if deg[v] > 0)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.labels is not None and self.labels != tuple(range(self.n)):
            out["labels"] = list(self.labels)
        return out


@dataclass(frozen=True)
class GraphFamily:
    members: tuple[Graph, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise InstanceError("graph family must be non-empty")

    @property
    def r_h(self) -> int:
        return max(h.n for h in self.members)

    @property
    def m_h(self) -> int:
        return max(h.m for h in self.members)

    def without_isolated(self) -> "GraphFamily":
        return GraphFamily(tuple(h.without_isolated() for h in self.members))

    def is_cliques(self) -> bool:
        return all(h.m == h.n * (h.n - 1) // 2 for h in self.members)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


class Subgraph(NamedTuple):
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def make(cls, vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> "Subgraph":
        return cls(tuple(sorted(set(vertices))),
                   tuple(sorted({_norm_edge(int(u), int(v)) for u, v in edges})))


def _sort_key(x: Any) -> Any:
    # ints, strings and tuples of them may coexist in JSON-derived universes
    if isinstance(x, tuple):
        return (2, tuple(_sort_key(y) for y in x))
    if isinstance(x, str):
        return (1, x)
    return (0, x)


def canonical_set(s: Iterable[Hashable]) -> tuple:
    return tuple(sorted(set(s), key=_sort_key))


def canonical_sets(sets: Iterable[Iterable[Hashable]]) -> tuple[tuple, ...]:
    return tuple(sorted((canonical_set(s) for s in sets),
                        key=lambda s: tuple(_sort_key(x) for x in s)))


def set_order_key(s: Sequence[Hashable]) -> tuple:
    return tuple(_sort_key(x) for x in s)


@dataclass(frozen=True)
class SetInstance:
    """``(universe, sets, r, t, k, mode)``; canonical on construction."""

    universe: tuple
    sets: tuple[tuple, ...]
    r: int
    t: int
    k: int
    mode: str = OVERLAP

    def __post_init__(self) -> None:
        universe = canonical_set(self.universe)
        if len(universe) != len(tuple(self.universe)):
            raise InstanceError("duplicate universe element")
        raw = [canonical_set(s) for s in self.sets]
        sets = canonical_sets(raw)
        for a, b in zip(sets, sets[1:]):
            if a == b:
                raise InstanceError(f"duplicate set {list(a)}")
        members = set(universe)
        for s in sets:
            if not 1 <= len(s) <= self.r:
                raise InstanceError(f"set {list(s)} has size outside [1, {self.r}]")
            missing = [x for x in s if x not in members]
            if missing:
                raise InstanceError(f"set {list(s)} uses elements {missing} outside the universe")
        if self.mode == OVERLAP:
            if not 0 <= self.t <= max(self.r - 1, 0):
                raise InstanceError(f"overlap bound t={self.t} outside [0, r-1]")
        elif self.mode == MEMBERSHIP:
            if self.t < 1:
                raise InstanceError("membership bound t must be >= 1")
        else:
            raise InstanceError(f"unknown mode {self.mode!r}")
        if self.k < 0:
            raise InstanceError("k must be non-negative")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "sets", sets)

    @property
    def n(self) -> int:
        return len(self.universe)

    def with_(self, **changes: Any) -> "SetInstance":
        fields = dict(universe=self.universe, sets=self.sets, r=self.r, t=self.t,
                      k=self.k, mode=self.mode)
        fields.update(changes)
        return SetInstance(**fields)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": "set",
            "universe": [_json_label(x) for x in self.universe],
            "sets": [[_json_label(x) for x in s] for s in self.sets],
            "r": self.r,
            "t": self.t,
            "k": self.k,
            "mode": self.mode,
        }


def _json_label(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_json_label(y) for y in x]
    return x


def _label_from_json(x: Any) -> Hashable:
    if isinstance(x, list):
        return tuple(_label_from_json(y) for y in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise InstanceError(f"unsupported element label {x!r}")


@dataclass(frozen=True)
class GraphInstance:
    g: Graph
    family: GraphFamily
    t: int
    k: int
    variant: str

    def __post_init__(self) -> None:
        if self.variant not in GRAPH_VARIANTS + (P2_MEMBERSHIP,):
            raise InstanceError(f"unknown variant {self.variant!r}")
        if self.k < 0:
            raise InstanceError("k must be non-negative")
        if self.is_membership:
            if self.t < 1:
                raise InstanceError("membership bound t must be >= 1")
        elif self.t < 0:
            raise InstanceError("overlap bound t must be >= 0")
        if self.variant == CLIQUE_EDGE_OVERLAP and not self.family.is_cliques():
            raise InstanceError("clique-edge-overlap needs a family of complete graphs")

    @property
    def is_membership(self) -> bool:
        return self.variant in MEMBERSHIP_VARIANTS or self.variant == P2_MEMBERSHIP

    @property
    def on_edges(self) -> bool:
        return self.variant in EDGE_VARIANTS

    @property
    def induced(self) -> bool:
        return self.variant in INDUCED_VARIANTS

    def with_(self, **changes: Any) -> "GraphInstance":
        fields = dict(g=self.g, family=self.family, t=self.t, k=self.k, variant=self.variant)
        fields.update(changes)
        return GraphInstance(**fields)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": "graph"}
        out.update(self.g.to_json())
        out["family"] = [h.to_json() for h in self.family.members]
        out.update({"t": self.t, "k": self.k, "variant": self.variant})
        return out


@dataclass(frozen=True)
class PackingSolution:
    """Chosen sets (set problems) or chosen subgraphs (graph problems)."""

    sets: tuple[tuple, ...] | None = None
    subgraphs: tuple[Subgraph, ...] | None = None

    def __post_init__(self) -> None:
        if (self.sets is None) == (self.subgraphs is None):
            raise InstanceError("a solution holds either sets or subgraphs")
        if self.sets is not None:
            object.__setattr__(self, "sets", tuple(canonical_set(s) for s in self.sets))
        else:
            object.__setattr__(self, "subgraphs", tuple(
                Subgraph.make(sg[0], sg[1]) for sg in self.subgraphs))

    @property
    def chosen(self) -> tuple:
        return self.sets if self.sets is not None else self.subgraphs

    def __len__(self) -> int:
        return len(self.chosen)

    def to_json(self) -> dict[str, Any]:
        if self.sets is not None:
            return {"sets": [[_json_label(x) for x in s] for s in self.sets]}
        return {"subgraphs": [{"vertices": list(sg.vertices), "edges": [list(e) for e in sg.edges]}
                              for sg in self.subgraphs]}


@dataclass
class KernelStats:
    elements_before: int
    elements_after: int
    sets_before: int
    sets_after: int
    bound: int
    early_solution: bool = False
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out = {
            "elements_before": self.elements_before,
            "elements_after": self.elements_after,
            "sets_before": self.sets_before,
            "sets_after": self.sets_after,
            "bound": self.bound,
            "early_solution": self.early_solution,
        }
        out.update(self.extra)
        return out


# ---------------------------------------------------------------- JSON


def instance_from_json(doc: Mapping[str, Any]) -> SetInstance | GraphInstance:
    try:
        kind = doc["kind"]
        if kind == "set":
            return SetInstance(
                universe=tuple(_label_from_json(x) for x in doc["universe"]),
                sets=tuple(tuple(_label_from_json(x) for x in s) for s in doc["sets"]),
                r=int(doc["r"]),
                t=int(doc["t"]),
                k=int(doc["k"]),
                mode=doc.get("mode", OVERLAP),
            )
        if kind == "graph":
            g = Graph.from_edges(int(doc["n"]), doc["edges"], doc.get("labels"))
            if doc.get("variant") == P2_MEMBERSHIP and not doc.get("family"):
                family = GraphFamily((complete_graph(2),))
            else:
                family = GraphFamily(tuple(
                    Graph.from_edges(int(h["n"]), h["edges"]) for h in doc["family"]))
            return GraphInstance(g, family, int(doc["t"]), int(doc["k"]), doc["variant"])
    except InstanceError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed instance: {exc!r}") from exc
    raise InstanceError(f"unknown instance kind {doc.get('kind')!r}")


def solution_from_json(doc: Mapping[str, Any]) -> PackingSolution:
    try:
        if "sets" in doc:
            return PackingSolution(sets=tuple(
                tuple(_label_from_json(x) for x in s) for s in doc["sets"]))
        if "subgraphs" in doc:
            return PackingSolution(subgraphs=tuple(
                Subgraph.make(sg["vertices"], sg["edges"]) for sg in doc["subgraphs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed solution: {exc!r}") from exc
    raise InstanceError("solution needs a 'sets' or 'subgraphs' field")


# ---------------------------------------------------------------- checks


def set_solution_violation(instance: SetInstance, sol: PackingSolution,
                           mode: str | None = None) -> str | None:
    """First violated condition of ``sol`` as a human-readable string."""
    mode = mode or instance.mode
    if sol.sets is None:
        return "solution holds subgraphs, expected sets"
    chosen = sol.sets
    known = set(instance.sets)
    for i, s in enumerate(chosen):
        if s not in known:
            return f"set #{i} {list(s)} is not in the instance"
    if len(chosen) < instance.k:
        return f"only {len(chosen)} sets, need k={instance.k}"
    seen: dict[tuple, int] = {}
    for i, s in enumerate(chosen):
        if s in seen:
            return f"sets #{seen[s]} and #{i} are identical"
        seen[s] = i
    if mode == OVERLAP:
        frozen = [frozenset(s) for s in chosen]
        for i, j in combinations(range(len(frozen)), 2):
            common = len(frozen[i] & frozen[j])
            if common > instance.t:
                return f"sets #{i} and #{j} overlap in {common} > t={instance.t} elements"
    else:
        counts = Counter(x for s in chosen for x in s)
        for x in instance.universe:
            if counts[x] > instance.t:
                return f"element {x!r} is in {counts[x]} > t={instance.t} sets"
    return None


def check_set_overlap(instance: SetInstance, sol: PackingSolution) -> bool:
    return set_solution_violation(instance, sol, OVERLAP) is None


def check_set_membership(instance: SetInstance, sol: PackingSolution) -> bool:
    return set_solution_violation(instance, sol, MEMBERSHIP) is None


def graph_solution_violation(instance: GraphInstance, sol: PackingSolution) -> str | None:
    from opk.subgraphs import is_isomorphic

    if sol.subgraphs is None:
        return "solution holds sets, expected subgraphs"
    g = instance.g
    chosen = sol.subgraphs
    variant = instance.variant
    family = instance.family.members
    for i, (vs, es) in enumerate(chosen):
        vset = set(vs)
        for v in vs:
            if not 0 <= v < g.n:
                return f"subgraph #{i}: vertex {v} not in the graph"
        for e in es:
            if e not in g.edge_set:
                return f"subgraph #{i}: edge {e} not in the graph"
            if e[0] not in vset or e[1] not in vset:
                return f"subgraph #{i}: edge {e} leaves its vertex set"
        if instance.induced:
            full = tuple(e for e in g.edges if e[0] in vset and e[1] in vset)
            if tuple(es) != full:
                return f"subgraph #{i}: not an induced subgraph"
        local = {v: j for j, v in enumerate(vs)}
        pattern = Graph.from_edges(len(vs), [(local[u], local[v]) for u, v in es])
        if not any(is_isomorphic(pattern, h) for h in family):
            return f"subgraph #{i}: not isomorphic to any family member"
    if len(chosen) < instance.k:
        return f"only {len(chosen)} subgraphs, need k={instance.k}"
    if len(set(chosen)) != len(chosen):
        return "a subgraph is chosen twice"
    if variant in (VERTEX_MEMBERSHIP, INDUCED_MEMBERSHIP, EDGE_MEMBERSHIP_NISV, P2_MEMBERSHIP):
        first: dict[tuple, int] = {}
        for i, sg in enumerate(chosen):
            if sg.vertices in first:
                return f"subgraphs #{first[sg.vertices]} and #{i} share the vertex set"
            first[sg.vertices] = i
    if variant in (EDGE_MEMBERSHIP, VERTEX_MEMBERSHIP_ISV):
        first = {}
        for i, sg in enumerate(chosen):
            if sg.edges in first:
                return f"subgraphs #{first[sg.edges]} and #{i} share the edge set"
            first[sg.edges] = i
    objects = [sg.edges if instance.on_edges else sg.vertices for sg in chosen]
    if instance.is_membership:
        counts = Counter(x for obj in objects for x in obj)
        for x, c in sorted(counts.items()):
            if c > instance.t:
                kind = "edge" if instance.on_edges else "vertex"
                return f"{kind} {x} is in {c} > t={instance.t} subgraphs"
    else:
        frozen = [frozenset(o) for o in objects]
        for i, j in combinations(range(len(frozen)), 2):
            common = len(frozen[i] & frozen[j])
            if common > instance.t:
                return f"subgraphs #{i} and #{j} overlap in {common} > t={instance.t}"
    return None


def check_graph_solution(instance: GraphInstance, sol: PackingSolution) -> bool:
    return graph_solution_violation(instance, sol) is None
