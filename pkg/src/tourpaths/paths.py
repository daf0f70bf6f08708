"""Exact directed-path and walk counts, and the bounds they are checked against.

A k-edge path is a sequence of k+1 distinct vertices with every
consecutive pair joined by a forward edge.  In a tournament a path
subgraph has exactly one consistent direction, so counting sequences is
the same as counting subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, perm

import numpy as np

from ._backend import kernels
from .tournament import Tournament

MAX_DP_VERTICES = 24
# n! < 2**63 up to n = 20, so a single uint64 DP table is exact there
_EXACT_U64_VERTICES = 20
_MERSENNE61 = (1 << 61) - 1


class EngineInfeasible(ValueError):
    """The requested engine cannot handle this instance size."""


def _python_dfs(t: Tournament, k: int) -> int:
    from . import _kernels_numpy

    return _kernels_numpy.dfs_count(list(t.rows), k)


def count_paths_dfs(t: Tournament, k: int) -> int:
    """Backtracking count, extending prefixes in increasing label order."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if t.n > 64:
        return _python_dfs(t, k)
    return int(kernels.dfs_count(t.rows_u64(), k))


def _crt(r64: int, rp: int) -> int:
    # x = r64 (mod 2**64), x = rp (mod p)
    inv = pow(1 << 64, -1, _MERSENNE61)
    h = ((rp - r64) * inv) % _MERSENNE61
    return r64 + (h << 64)


def count_all_paths(t: Tournament, kmax: int | None = None) -> list[int]:
    """Path counts for every k = 0..n-1 from a single subset-DP pass.

    Entries above ``kmax`` (when given) are left at 0.
    """
    n = t.n
    if n > MAX_DP_VERTICES:
        raise EngineInfeasible(f"subset DP limited to n <= {MAX_DP_VERTICES}, got n={n}")
    kmax = n - 1 if kmax is None else min(kmax, n - 1)
    rows = t.rows_u64()
    low = kernels.subset_dp_counts(rows, kmax, np.uint64(0))
    if n <= _EXACT_U64_VERTICES:
        return [int(x) for x in low]
    # counts are below n! < 2**64 * (2**61 - 1); recover them by CRT
    high = kernels.subset_dp_counts(rows, kmax, np.uint64(_MERSENNE61))
    return [_crt(int(a), int(b)) for a, b in zip(low, high)]


def count_paths_subset_dp(t: Tournament, k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= t.n:
        if t.n > MAX_DP_VERTICES:
            raise EngineInfeasible(f"subset DP limited to n <= {MAX_DP_VERTICES}, got n={t.n}")
        return 0
    return count_all_paths(t, k)[k]


def count_paths(t: Tournament, k: int) -> int:
    """Default engine: subset DP for small n and long paths, backtracking otherwise."""
    if t.n <= 16 and k >= 3:
        return count_paths_subset_dp(t, k)
    return count_paths_dfs(t, k)


def count_walks(t: Tournament, k: int) -> int:
    """1^T A^k 1 over exact integers."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = t.n
    a = t.matrix()
    if n ** (k + 1) < 2**62:
        v = np.ones(n, dtype=np.int64)
        a = a.astype(np.int64)
    else:
        v = np.ones(n, dtype=object)
        a = a.astype(object)
    for _ in range(k):
        v = a @ v
    return int(sum(int(x) for x in v))


def hamilton_path_count(t: Tournament) -> int:
    count = count_paths_subset_dp(t, t.n - 1)
    # Redei: every tournament has a Hamilton path
    assert count >= 1, f"no Hamilton path in {t}"
    return count


@dataclass(frozen=True)
class BoundPair:
    upper: Fraction
    lower: int


def bounds(n: int, k: int) -> BoundPair:
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return BoundPair(Fraction(n ** (k + 1), 2**k), comb(n, k + 1))


def within_upper(count: int, n: int, k: int) -> bool:
    """count <= n**(k+1) / 2**k, cross-multiplied."""
    return count * 2**k <= n ** (k + 1)


@dataclass(frozen=True)
class Theorem1Certificate:
    n: int
    k: int
    count: int
    upper: Fraction
    lower: int
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


_ENGINES = {
    "dfs": count_paths_dfs,
    "subset-dp": count_paths_subset_dp,
    "walks": count_walks,
    "auto": count_paths,
}


def count_with(t: Tournament, k: int, engine: str = "auto") -> int:
    try:
        fn = _ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {sorted(_ENGINES)}") from None
    return fn(t, k)


def check_theorem1(t: Tournament, k: int, engine: str = "auto") -> Theorem1Certificate:
    count = count_with(t, k, engine)
    b = bounds(t.n, k)
    return Theorem1Certificate(
        n=t.n,
        k=k,
        count=count,
        upper=b.upper,
        lower=b.lower,
        lower_ok=b.lower <= count,
        upper_ok=within_upper(count, t.n, k),
    )


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k): the number of injective (k+1)-sequences."""
    return perm(n, k + 1) if k + 1 <= n else 0
