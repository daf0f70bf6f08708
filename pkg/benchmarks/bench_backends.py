#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback on fixed instances.

    python benchmarks/bench_backends.py [--repeat 3] [--quick]

Each row reports the best of ``--repeat`` runs, after one warm-up call so
that numba compilation is excluded.  Results are checked for equality
before timing.
"""

import argparse
import time

import numpy as np

from tourpaths import _kernels_numba as nb
from tourpaths import _kernels_numpy as npk
from tourpaths.tournament import random_tournament


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(quick):
    t12 = random_tournament(12, 1).rows_u64()
    t18 = random_tournament(18 if not quick else 14, 2).rows_u64()
    t50 = random_tournament(50, 3).rows_u64()
    census_n = 5 if quick else 6
    total = 1 << (census_n * (census_n - 1) // 2)
    return [
        ("dfs n=12 k=11", lambda m: m.dfs_count(t12, 11)),
        ("dfs n=50 k=3", lambda m: m.dfs_count(t50, 3)),
        (f"subset-dp n={len(t18)} all k", lambda m: m.subset_dp_counts(t18, len(t18) - 1, np.uint64(0))),
        ("subset-dp n=12 mod p", lambda m: m.subset_dp_counts(t12, 11, np.uint64((1 << 61) - 1))),
        (f"census n={census_n}", lambda m: m.census_range(census_n, 0, total)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    args = ap.parse_args()

    print(f"{'kernel':<28}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, call in cases(args.quick):
        a, b = call(nb), call(npk)
        same = (
            all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b))
            if isinstance(a, tuple)
            else np.array_equal(np.asarray(a), np.asarray(b))
        )
        if not same:
            raise SystemExit(f"backends disagree on {name}")
        t_nb = best_of(lambda: call(nb), args.repeat)
        t_np = best_of(lambda: call(npk), args.repeat)
        print(f"{name:<28}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
