# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled packing search for universes of at most 64 elements."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, calloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _pop(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef int _pop_row(const uint64_t* row, int words) nogil:
    cdef int c = 0
    cdef int w
    for w in range(words):
        c += __builtin_popcountll(row[w])
    return c


cdef int _overlap_dfs(const uint64_t* compat, uint64_t* stack, int words, int depth,
                      int need, int* chosen) nogil:
    cdef uint64_t* cand = stack + depth * words
    cdef uint64_t* nxt = stack + (depth + 1) * words
    cdef const uint64_t* row
    cdef int w, i, j
    cdef uint64_t low
    if need == 0:
        return 1
    for w in range(words):
        while cand[w]:
            if _pop_row(cand, words) < need:
                return 0
            low = cand[w] & (~cand[w] + 1)
            i = w * 64 + __builtin_ctzll(cand[w])
            cand[w] ^= low
            chosen[depth] = i
            row = compat + i * words
            for j in range(words):
                nxt[j] = cand[j] & row[j]
            if _overlap_dfs(compat, stack, words, depth + 1, need - 1, chosen):
                return 1
    return 0


def search_overlap(masks, int k, int t):
    cdef int n = len(masks)
    if k <= 0:
        return []
    if k > n:
        return None
    cdef int words = (n + 63) // 64
    cdef uint64_t* m = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef uint64_t* compat = <uint64_t*> calloc(n * words, sizeof(uint64_t))
    cdef uint64_t* stack = <uint64_t*> calloc((k + 1) * words, sizeof(uint64_t))
    cdef int* chosen = <int*> malloc(k * sizeof(int))
    cdef int i, j, found
    try:
        for i in range(n):
            m[i] = <uint64_t> masks[i]
        with nogil:
            for i in range(n):
                for j in range(i + 1, n):
                    if _pop(m[i] & m[j]) <= t:
                        compat[i * words + j // 64] |= (<uint64_t> 1) << (j % 64)
            for i in range(n):
                stack[i // 64] |= (<uint64_t> 1) << (i % 64)
            found = _overlap_dfs(compat, stack, words, 0, k, chosen)
        if not found:
            return None
        return [chosen[i] for i in range(k)]
    finally:
        free(m)
        free(compat)
        free(stack)
        free(chosen)


cdef struct MemState:
    const uint64_t* masks
    const int* groups
    char* used
    int* counts
    int* chosen
    int n
    int t


cdef int _feasible(MemState* s, int start, uint64_t saturated) nogil:
    cdef int c = 0
    cdef int j
    for j in range(start, s.n):
        if s.masks[j] & saturated:
            continue
        if s.groups != NULL and s.used[s.groups[j]]:
            continue
        c += 1
    return c


cdef int _member_dfs(MemState* s, int start, int depth, int need, uint64_t saturated) nogil:
    cdef int i, b
    cdef uint64_t bits, newly
    if need == 0:
        return 1
    if _feasible(s, start, saturated) < need:
        return 0
    for i in range(start, s.n - need + 1):
        if s.masks[i] & saturated:
            continue
        if s.groups != NULL and s.used[s.groups[i]]:
            continue
        newly = 0
        bits = s.masks[i]
        while bits:
            b = __builtin_ctzll(bits)
            bits &= bits - 1
            s.counts[b] += 1
            if s.counts[b] >= s.t:
                newly |= (<uint64_t> 1) << b
        s.chosen[depth] = i
        if s.groups != NULL:
            s.used[s.groups[i]] = 1
        if _member_dfs(s, i + 1, depth + 1, need - 1, saturated | newly):
            return 1
        if s.groups != NULL:
            s.used[s.groups[i]] = 0
        bits = s.masks[i]
        while bits:
            b = __builtin_ctzll(bits)
            bits &= bits - 1
            s.counts[b] -= 1
    return 0


def search_membership(masks, int k, int t, groups=None):
    cdef int n = len(masks)
    if k <= 0:
        return []
    if k > n:
        return None
    cdef int ngroups = (max(groups) + 1) if groups is not None and n else 1
    cdef uint64_t* m = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef int* g = NULL
    cdef char* used = <char*> calloc(ngroups, sizeof(char))
    cdef int* counts = <int*> calloc(64, sizeof(int))
    cdef int* chosen = <int*> malloc(k * sizeof(int))
    cdef MemState s
    cdef int i, found
    try:
        for i in range(n):
            m[i] = <uint64_t> masks[i]
        if groups is not None:
            g = <int*> malloc(n * sizeof(int))
            for i in range(n):
                g[i] = groups[i]
        s.masks = m
        s.groups = g
        s.used = used
        s.counts = counts
        s.chosen = chosen
        s.n = n
        s.t = t
        with nogil:
            found = _member_dfs(&s, 0, 0, k, 0)
        if not found:
            return None
        return [chosen[i] for i in range(k)]
    finally:
        free(m)
        free(g)
        free(used)
        free(counts)
        free(chosen)
