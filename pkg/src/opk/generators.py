"""Seeded random instances.

Randomness comes from numpy's Philox counter-based generator. Each stream is
keyed by ``(seed, *path)`` through ``SeedSequence`` spawn keys, so trial ``i``
of a run draws the same values no matter which other trials run.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from opk.model import MEMBERSHIP, OVERLAP, Graph, SetInstance


def stream(seed: int, *path: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def _int(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in the closed range [lo, hi]."""
    return int(rng.integers(lo, hi + 1))


def random_set_instance(rng: np.random.Generator, mode: str = OVERLAP,
                        max_n: int = 12, max_sets: int = 20) -> SetInstance:
    n = _int(rng, 4, max(4, max_n))
    r = _int(rng, 2, 4)
    t = _int(rng, 0, r - 2) if mode == OVERLAP else _int(rng, 1, 3)
    k = _int(rng, 1, 4)
    target = _int(rng, 3, max(3, max_sets))
    lo = t + 1 if mode == OVERLAP else 1
    sets: set[tuple[int, ...]] = set()
    for _ in range(target * 6):
        if len(sets) >= target:
            break
        size = _int(rng, lo, min(r, n))
        sets.add(tuple(sorted(int(x) for x in rng.choice(n, size=size, replace=False))))
    return SetInstance(tuple(range(n)), tuple(sets), r, t, k, mode)


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


__all__ = ["MEMBERSHIP", "OVERLAP", "random_graph", "random_set_instance", "stream"]
