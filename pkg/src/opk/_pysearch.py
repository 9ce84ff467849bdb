"""Pure-Python exhaustive packing search over bitmask-encoded items.

Each item is an int whose set bits are the elements it covers. Both routines
return the indices of ``k`` chosen items in increasing order, or ``None``.
"""

from __future__ import annotations

from typing import Sequence


def _popcount(x: int) -> int:
    return bin(x).count("1")


def search_overlap(masks: Sequence[int], k: int, t: int) -> list[int] | None:
    """k items whose pairwise intersections have at most ``t`` elements."""
    n = len(masks)
    if k <= 0:
        return []
    if k > n:
        return None
    compat = [0] * n
    for i in range(n):
        mi = masks[i]
        row = 0
        for j in range(i + 1, n):
            if _popcount(mi & masks[j]) <= t:
                row |= 1 << j
        compat[i] = row
    chosen: list[int] = []

    def dfs(cand: int, need: int) -> bool:
        if need == 0:
            return True
        while cand:
            if _popcount(cand) < need:
                return False
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            chosen.append(i)
            if dfs(cand & compat[i], need - 1):
                return True
            chosen.pop()
        return False

    return list(chosen) if dfs((1 << n) - 1, k) else None


def search_membership(masks: Sequence[int], k: int, t: int,
                      groups: Sequence[int] | None = None) -> list[int] | None:
    """k items such that no element is covered more than ``t`` times.

    With ``groups``, the chosen items must also carry pairwise distinct group ids.
    """
    n = len(masks)
    if k <= 0:
        return []
    if k > n:
        return None
    counts: dict[int, int] = {}
    chosen: list[int] = []
    used_groups: set[int] = set()

    def feasible_after(start: int, saturated: int) -> int:
        c = 0
        for j in range(start, n):
            if not masks[j] & saturated and (groups is None or groups[j] not in used_groups):
                c += 1
        return c

    def dfs(start: int, need: int, saturated: int) -> bool:
        if need == 0:
            return True
        if feasible_after(start, saturated) < need:
            return False
        for i in range(start, n - need + 1):
            m = masks[i]
            if m & saturated:
                continue
            if groups is not None and groups[i] in used_groups:
                continue
            newly = 0
            bits = m
            while bits:
                low = bits & -bits
                b = low.bit_length() - 1
                bits ^= low
                c = counts.get(b, 0) + 1
                counts[b] = c
                if c >= t:
                    newly |= low
            chosen.append(i)
            if groups is not None:
                used_groups.add(groups[i])
            if dfs(i + 1, need - 1, saturated | newly):
                return True
            chosen.pop()
            if groups is not None:
                used_groups.discard(groups[i])
            bits = m
            while bits:
                low = bits & -bits
                b = low.bit_length() - 1
                bits ^= low
                counts[b] -= 1
        return False

    return list(chosen) if dfs(0, k, 0) else None
