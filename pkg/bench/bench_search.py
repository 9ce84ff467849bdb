"""Compare the compiled and pure-Python exhaustive search kernels.

Usage: python3 bench/bench_search.py [--cases 40] [--items 28] [--seed 0]

Cases are random bitmask collections with a target one above the optimum, so
each search must exhaust its tree. Both kernels get identical inputs and their
answers are checked against each other.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from opk import _pysearch

try:
    from opk import _csearch
except ImportError:
    _csearch = None


def make_case(rng: np.random.Generator, items: int, width: int, size: int) -> list[int]:
    masks = []
    for _ in range(items):
        bits = rng.choice(width, size=size, replace=False)
        masks.append(int(sum(1 << int(b) for b in bits)))
    return masks


def optimum(search, masks, t, **kw) -> int:
    k = 0
    while search(masks, k + 1, t, **kw) is not None:
        k += 1
    return k


def timed(fn, *args, **kw) -> tuple[float, object]:
    start = time.perf_counter()
    out = fn(*args, **kw)
    return time.perf_counter() - start, out


def run(kind: str, cases: int, items: int, seed: int) -> None:
    rng = np.random.default_rng(seed)
    py_times, c_times = [], []
    for _ in range(cases):
        if kind == "overlap":
            masks, t = make_case(rng, items, 24, 4), 1
            py, cy = _pysearch.search_overlap, _csearch.search_overlap
        else:
            masks, t = make_case(rng, items, 16, 3), 2
            py, cy = _pysearch.search_membership, _csearch.search_membership
        k = optimum(cy, masks, t) + 1
        tp, a = timed(py, masks, k, t)
        tc, b = timed(cy, masks, k, t)
        assert a == b, "kernels disagree"
        py_times.append(tp)
        c_times.append(tc)
    mp, mc = statistics.median(py_times), statistics.median(c_times)
    print(f"{kind:10s} cases={cases} items={items}  python {mp * 1e3:9.3f} ms  "
          f"cython {mc * 1e3:9.3f} ms  speedup x{mp / max(mc, 1e-9):.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", type=int, default=40)
    ap.add_argument("--items", type=int, default=28)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _csearch is None:
        raise SystemExit("compiled kernel not built; run: pip install -e . --no-build-isolation")
    for kind in ("overlap", "membership"):
        run(kind, args.cases, args.items, args.seed)


if __name__ == "__main__":
    main()
