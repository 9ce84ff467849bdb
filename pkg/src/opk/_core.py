"""Selects the compiled search kernel when available, else the Python one.

Set ``OPK_PURE=1`` to force the Python implementation. The compiled kernel
works on 64-bit masks, so larger universes always use the Python path.
"""

from __future__ import annotations

import os
from typing import Sequence

from opk import _pysearch

try:
    if os.environ.get("OPK_PURE") == "1":
        raise ImportError("pure mode requested")
    from opk import _csearch
except ImportError:
    _csearch = None

BACKEND = "cython" if _csearch is not None else "python"


def _fits(masks: Sequence[int]) -> bool:
    return _csearch is not None and all(m < (1 << 64) for m in masks)


def search_overlap(masks: Sequence[int], k: int, t: int) -> list[int] | None:
    if _fits(masks):
        return _csearch.search_overlap(list(masks), k, t)
    return _pysearch.search_overlap(masks, k, t)


def search_membership(masks: Sequence[int], k: int, t: int,
                      groups: Sequence[int] | None = None) -> list[int] | None:
    if _fits(masks):
        return _csearch.search_membership(list(masks), k, t,
                                          None if groups is None else list(groups))
    return _pysearch.search_membership(masks, k, t, groups)
