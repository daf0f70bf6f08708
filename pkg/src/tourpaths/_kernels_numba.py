"""numba kernels: backtracking path count, subset DP, and the census sweep.

Adjacency is passed as ``rows``, a uint64 array whose entry ``i`` has bit
``j`` set iff ``i -> j``.  All kernels require n <= 64.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - _ONE
        c += 1
    return c


@njit(cache=True)
def _ctz(low):
    # low must have exactly one bit set
    return _popcount(low - _ONE)


@njit(cache=True)
def _addmod(a, b, modulus):
    s = a + b
    if modulus != _ZERO and s >= modulus:
        s -= modulus
    return s


@njit(cache=True)
def dfs_count(rows, k):
    n = rows.shape[0]
    if k == 0:
        return n
    if k >= n:
        return 0
    path = np.empty(k + 1, np.int64)
    cand = np.empty(k + 1, np.uint64)
    total = 0
    for x0 in range(n):
        path[0] = x0
        visited = _ONE << np.uint64(x0)
        cand[0] = rows[x0] & ~visited
        d = 0
        while d >= 0:
            if d == k - 1:
                # last edge: every remaining candidate closes a path
                total += _popcount(cand[d])
                cand[d] = _ZERO
            c = cand[d]
            if c == _ZERO:
                visited &= ~(_ONE << np.uint64(path[d]))
                d -= 1
                continue
            low = c & (~c + _ONE)
            cand[d] = c ^ low
            d += 1
            path[d] = _ctz(low)
            visited |= low
            cand[d] = rows[path[d]] & ~visited
    return total


@njit(cache=True)
def subset_dp_counts(rows, kmax, modulus):
    """Path counts for k = 0..n-1, reduced mod ``modulus`` (0 means 2**64).

    ``dp[S, v]`` counts directed paths whose vertex set is exactly ``S`` and
    which end at ``v``.  Subsets are visited in increasing integer order,
    which already places every subset after all of its proper subsets.
    Paths with more than ``kmax`` edges are not extended.
    """
    n = rows.shape[0]
    full = 1 << n
    dp = np.zeros((full, n), np.uint64)
    counts = np.zeros(n, np.uint64)
    for v in range(n):
        dp[1 << v, v] = _ONE
    for s in range(1, full):
        su = np.uint64(s)
        size = _popcount(su) - 1
        if size > kmax:
            continue
        for v in range(n):
            val = dp[s, v]
            if val == _ZERO:
                continue
            counts[size] = _addmod(counts[size], val, modulus)
            if size == kmax:
                continue
            ext = rows[v] & ~su
            while ext:
                low = ext & (~ext + _ONE)
                ext ^= low
                w = _ctz(low)
                t = s | (1 << w)
                dp[t, w] = _addmod(dp[t, w], val, modulus)
    return counts


@njit(cache=True)
def decode_rows(n, code, rows):
    """Fill ``rows`` from an upper-triangle code (bit p <-> p-th pair i<j)."""
    for i in range(n):
        rows[i] = _ZERO
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (code >> p) & 1:
                rows[i] |= _ONE << np.uint64(j)
            else:
                rows[j] |= _ONE << np.uint64(i)
            p += 1


@njit(cache=True)
def census_range(n, start, stop):
    """Per-k extremal path counts over codes in ``[start, stop)``.

    Returns (mins, maxs, min_codes, max_codes, trans_mins, trans_maxs,
    nontrans_min_ties, transitive_seen).  Codes are scanned in increasing
    order, so the first code reaching an extremum is the smallest one.
    """
    big = np.iinfo(np.int64).max
    mins = np.full(n, big, np.int64)
    maxs = np.full(n, -1, np.int64)
    min_codes = np.full(n, -1, np.int64)
    max_codes = np.full(n, -1, np.int64)
    tmins = np.full(n, big, np.int64)
    tmaxs = np.full(n, -1, np.int64)
    ties = np.zeros(n, np.int64)
    n_trans = 0

    full = 1 << n
    rows = np.zeros(n, np.uint64)
    dp = np.zeros((full, n), np.int64)
    counts = np.zeros(n, np.int64)
    seen = np.zeros(n, np.bool_)
    for code in range(start, stop):
        decode_rows(n, code, rows)
        dp[:, :] = 0
        counts[:] = 0
        for v in range(n):
            dp[1 << v, v] = 1
        for s in range(1, full):
            su = np.uint64(s)
            size = _popcount(su) - 1
            for v in range(n):
                val = dp[s, v]
                if val == 0:
                    continue
                counts[size] += val
                ext = rows[v] & ~su
                while ext:
                    low = ext & (~ext + _ONE)
                    ext ^= low
                    w = _ctz(low)
                    dp[s | (1 << w), w] += val

        # transitive iff the out-degrees are pairwise distinct
        seen[:] = False
        transitive = True
        for v in range(n):
            d = _popcount(rows[v])
            if seen[d]:
                transitive = False
                break
            seen[d] = True
        if transitive:
            n_trans += 1

        for k in range(n):
            c = counts[k]
            if c < mins[k]:
                mins[k] = c
                min_codes[k] = code
                ties[k] = 0
            if c == mins[k] and not transitive:
                ties[k] += 1
            if c > maxs[k]:
                maxs[k] = c
                max_codes[k] = code
            if transitive:
                if c < tmins[k]:
                    tmins[k] = c
                if c > tmaxs[k]:
                    tmaxs[k] = c
    return mins, maxs, min_codes, max_codes, tmins, tmaxs, ties, n_trans
