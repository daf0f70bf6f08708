"""Pure-numpy fallback for the kernels in ``_kernels_numba``.

Same signatures and results.  The backtracking count runs on Python ints;
the subset DP and the census are vectorised over subsets and over batches
of tournaments respectively.
"""

import numpy as np

_CENSUS_BATCH = 8192


def dfs_count(rows, k):
    n = len(rows)
    if k == 0:
        return n
    if k >= n:
        return 0
    rows = [int(r) for r in rows]
    total = 0
    for x0 in range(n):
        visited = 1 << x0
        path = [x0]
        cand = [rows[x0] & ~visited]
        while cand:
            d = len(cand) - 1
            if d == k - 1:
                total += cand[d].bit_count()
                cand[d] = 0
            c = cand[d]
            if c == 0:
                visited &= ~(1 << path.pop())
                cand.pop()
                continue
            low = c & -c
            cand[d] = c ^ low
            v = low.bit_length() - 1
            path.append(v)
            visited |= low
            cand.append(rows[v] & ~visited)
    return total


def _adjacency(rows):
    n = len(rows)
    rows = np.asarray(rows, dtype=np.uint64)
    bits = np.uint64(1) << np.arange(n, dtype=np.uint64)
    return (rows[:, None] & bits[None, :]) != 0


def _popcounts(n):
    idx = np.arange(1 << n)
    pc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pc += (idx >> b) & 1
    return pc


def subset_dp_counts(rows, kmax, modulus):
    n = len(rows)
    adj = _adjacency(rows)
    modulus = np.uint64(modulus)
    full = 1 << n
    pc = _popcounts(n)
    dp = np.zeros((full, n), dtype=np.uint64)
    counts = np.zeros(n, dtype=np.uint64)
    for v in range(n):
        dp[1 << v, v] = 1

    def addmod(a, b):
        s = a + b
        if modulus:
            s = np.where(s >= modulus, s - modulus, s)
        return s

    for size in range(1, min(kmax, n - 1) + 1):
        layer = np.flatnonzero(pc == size + 1)
        for w in range(n):
            sel = layer[(layer >> w) & 1 == 1]
            prev = sel ^ (1 << w)
            acc = np.zeros(len(sel), dtype=np.uint64)
            for v in np.flatnonzero(adj[:, w]):
                acc = addmod(acc, dp[prev, v])
            dp[sel, w] = acc
    with np.errstate(over="ignore"):
        for size in range(min(kmax, n - 1) + 1):
            block = dp[pc == size + 1]
            if modulus:
                # split into 32-bit halves so the partial sums cannot wrap
                hi = int((block >> np.uint64(32)).sum(dtype=np.uint64))
                lo = int((block & np.uint64(0xFFFFFFFF)).sum(dtype=np.uint64))
                counts[size] = ((hi << 32) + lo) % int(modulus)
            else:
                counts[size] = block.sum(dtype=np.uint64)
    return counts


def _census_batch(n, codes, pairs, pc):
    b = len(codes)
    adj = np.zeros((b, n, n), dtype=np.int64)
    for p, (i, j) in enumerate(pairs):
        bit = (codes >> p) & 1
        adj[:, i, j] = bit
        adj[:, j, i] = 1 - bit
    full = 1 << n
    dp = np.zeros((b, full, n), dtype=np.int64)
    for v in range(n):
        dp[:, 1 << v, v] = 1
    for s in range(1, full):
        if pc[s] == 1:
            continue
        for w in range(n):
            if not (s >> w) & 1:
                continue
            prev = s ^ (1 << w)
            dp[:, s, w] = np.einsum("bv,bv->b", dp[:, prev, :], adj[:, :, w])
    counts = np.stack([dp[:, pc == size + 1, :].sum(axis=(1, 2)) for size in range(n)], axis=1)
    outdeg = adj.sum(axis=2)
    transitive = np.all(np.sort(outdeg, axis=1) == np.arange(n), axis=1)
    return counts, transitive


def census_range(n, start, stop):
    big = np.iinfo(np.int64).max
    mins = np.full(n, big, np.int64)
    maxs = np.full(n, -1, np.int64)
    min_codes = np.full(n, -1, np.int64)
    max_codes = np.full(n, -1, np.int64)
    tmins = np.full(n, big, np.int64)
    tmaxs = np.full(n, -1, np.int64)
    ties = np.zeros(n, np.int64)
    n_trans = 0
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pc = _popcounts(n)
    for lo in range(start, stop, _CENSUS_BATCH):
        codes = np.arange(lo, min(stop, lo + _CENSUS_BATCH), dtype=np.int64)
        counts, transitive = _census_batch(n, codes, pairs, pc)
        n_trans += int(transitive.sum())
        for k in range(n):
            c = counts[:, k]
            # argmin/argmax return the first, i.e. smallest, code
            i_min = int(np.argmin(c))
            if c[i_min] < mins[k]:
                mins[k] = c[i_min]
                min_codes[k] = codes[i_min]
                ties[k] = 0
            if c[i_min] == mins[k]:
                ties[k] += int(np.sum((c == mins[k]) & ~transitive))
            i_max = int(np.argmax(c))
            if c[i_max] > maxs[k]:
                maxs[k] = c[i_max]
                max_codes[k] = codes[i_max]
            if transitive.any():
                tmins[k] = min(tmins[k], c[transitive].min())
                tmaxs[k] = max(tmaxs[k], c[transitive].max())
    return mins, maxs, min_codes, max_codes, tmins, tmaxs, ties, n_trans
