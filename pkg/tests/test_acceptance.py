"""Exit criteria.  Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the summary.
"""

import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from cli_cases import run
from tourpaths.census import census_all, enumerate_labeled, szele_lower
from tourpaths.kernel import (
    chain_trace,
    constant_kernel,
    density_gradient,
    maximize_density,
    path_density,
    random_kernel,
    regularity_gap,
    stability_bound,
    tournament_to_kernel,
)
from tourpaths.paths import count_all_paths, count_paths, count_paths_dfs, count_paths_subset_dp, count_walks
from tourpaths.tournament import degree_stats, random_tournament

SLACK = 1e-12


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture(scope="module")
def all_small():
    """Every labeled tournament with n <= 6, with all path counts."""
    started = time.perf_counter()
    rows = []
    for n in range(1, 7):
        for t in enumerate_labeled(n):
            rows.append((t, count_all_paths(t)))
    return rows, time.perf_counter() - started


def _is_transitive(t):
    return sorted(t.outdegrees()) == list(range(t.n))


def test_criterion_01_exhaustive_path_bounds(report, all_small):
    rows, elapsed = all_small
    bad = 0
    minima = {}
    transitive_ok = True
    for t, counts in rows:
        n = t.n
        for k in range(n):
            c = counts[k]
            if not (comb(n, k + 1) <= c and c * 2**k <= n ** (k + 1)):
                bad += 1
            minima[n, k] = min(minima.get((n, k), c), c)
            if _is_transitive(t) and c != comb(n, k + 1):
                transitive_ok = False
    min_ok = all(v == comb(n, k + 1) for (n, k), v in minima.items())
    ok = bad == 0 and min_ok and transitive_ok and elapsed <= 60
    report(1, "binom(n,k+1) <= paths <= n^(k+1)/2^k, all labeled n<=6", ok,
           f"tournaments={len(rows)} violations={bad} min=binom:{min_ok} transitive_tight:{transitive_ok} time={elapsed:.1f}s")


def test_criterion_02_engine_equivalence(report):
    mismatches = checked = 0
    for n in range(1, 6):
        for t in enumerate_labeled(n):
            for k in range(n):
                checked += 1
                mismatches += count_paths_dfs(t, k) != count_paths_subset_dp(t, k)
    for n in range(6, 11):
        for seed in range(1000):
            t = random_tournament(n, seed)
            dp = count_all_paths(t)
            for k in range(n):
                checked += 1
                mismatches += count_paths_dfs(t, k) != dp[k]
    report(2, "dfs == subset-dp (exhaustive n<=5, 1000 seeds each n=6..10)", mismatches == 0,
           f"comparisons={checked} mismatches={mismatches}")


def test_criterion_03_two_path_closed_form(report):
    count_paths(random_tournament(50, 0), 2)  # compile outside the timed loop
    started = time.perf_counter()
    mismatches = 0
    for seed in range(1000):
        t = random_tournament(50, seed)
        s = degree_stats(t)
        mismatches += count_paths(t, 2) != sum(i * o for i, o in zip(s.indegrees, s.outdegrees))
    elapsed = time.perf_counter() - started
    report(3, "paths(t,2) == sum indeg*outdeg, 1000 tournaments n=50", mismatches == 0 and elapsed < 10,
           f"mismatches={mismatches} time={elapsed:.2f}s")


def test_criterion_04_kernel_fuzz(report):
    worst_density = worst_ratio = worst_cs = -np.inf
    failures = 0
    kernels = 0
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        m = 1 + seed % 32
        kern = random_kernel(m, rng, boundary=seed % 2 == 1)
        kernels += 1
        for k in range(1, 9):
            d = path_density(kern, k)
            worst_density = max(worst_density, d - 2.0**-k)
            if d > 2.0**-k + SLACK:
                failures += 1
            if k < 2:
                continue
            tr = chain_trace(kern, k)
            for step in tr.steps:
                if step.ratio is not None:
                    worst_ratio = max(worst_ratio, step.ratio)
                    if step.ratio > 0.25 + SLACK:
                        failures += 1
            worst_cs = max(worst_cs, tr.density - tr.cs_bound)
            if not (tr.cs_ok and tr.bound_ok and tr.edge_ok):
                failures += 1
    report(4, "density <= 2^-k, A_t/A_(t-1) <= 1/4, Cauchy-Schwarz (1000 kernels, m<=32, k<=8)", failures == 0,
           f"kernels={kernels} failures={failures} max(d-2^-k)={worst_density:.3g} max ratio={worst_ratio:.6f} max(d-cs)={worst_cs:.3g}")


def test_criterion_05_constant_half_exact(report):
    ok = all(path_density(constant_kernel(m), k) == Fraction(1, 2**k) for m in (1, 2, 3, 7) for k in range(1, 11))
    report(5, "constant-1/2 kernel density == 2^-k exactly, k<=10", ok)


def test_criterion_06_walk_kernel_consistency(report):
    mismatches = checked = 0
    for n in range(1, 13):
        for seed in range(100):
            t = random_tournament(n, seed)
            kern = tournament_to_kernel(t)
            for k in range(1, 7):
                checked += 1
                mismatches += path_density(kern, k) * n ** (k + 1) != count_walks(t, k)
    report(6, "n^(k+1) * density(kernel(t)) == walks(t,k), n<=12 x 100 seeds, k<=6", mismatches == 0,
           f"comparisons={checked} mismatches={mismatches}")


def test_criterion_07_stability(report, all_small):
    rows, _ = all_small
    bad = checked = 0
    for t, counts in rows:
        eps = degree_stats(t).epsilon
        for k in range(1, t.n):
            checked += 1
            bad += counts[k] > stability_bound(t.n, k, eps)
    for seed in range(1000):
        t = random_tournament(16, seed)
        checked += 1
        bad += count_paths(t, 4) > stability_bound(16, 4, degree_stats(t).epsilon)
    report(7, "paths <= (1-2 eps^2) n^(k+1)/2^k (all labeled n<=6; 1000 random n=16 k=4)", bad == 0,
           f"comparisons={checked} violations={bad}")


def test_criterion_08_optimizer(report):
    res = maximize_density(4, 3, iterations=5000, step_size=4.0, seed=0, starts=4)
    conv_ok = abs(res.density - 0.125) <= 1e-4 and res.density <= 0.125 + 1e-9
    reg_ok = res.regularity_gap <= 1e-3
    rng = np.random.default_rng(2024)
    worst = 0.0
    h = 1e-6
    for _ in range(20):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 7))
        w = random_kernel(m, rng).as_float()
        _, grad = density_gradient(w, k)
        for a in range(m):
            for b in range(m):
                e = np.zeros((m, m))
                e[a, b] = h
                fd = (density_gradient(w + e, k)[0] - density_gradient(w - e, k)[0]) / (2 * h)
                worst = max(worst, abs(fd - grad[a, b]))
    grad_ok = worst <= 1e-6
    report(8, "optimizer m=4 k=3: |d-1/8|<=1e-4, d<=1/8+1e-9, reg gap<=1e-3; gradient vs FD<=1e-6",
           conv_ok and reg_ok and grad_ok,
           f"density={res.density!r} gap={res.gap:.3g} reg_gap={res.regularity_gap:.3g} max|fd-grad|={worst:.3g}")


def test_criterion_09_hamilton_szele(report):
    lines = []
    ok = True
    for n in range(1, 7):
        _, ham = census_all(n)
        ok &= ham.min_h >= 1 and ham.max_h >= szele_lower(n) and ham.passed
        lines.append(f"n={n}:H in [{ham.min_h},{ham.max_h}] szele={ham.szele_lower}")
    _, ham5 = census_all(5)
    ok &= ham5.max_h >= 8
    report(9, "min_H >= 1 and max_H >= ceil(n!/2^(n-1)), n<=6", ok, " ".join(lines))


def test_criterion_10_determinism(report, tmp_path):
    one, eight = tmp_path / "j1", tmp_path / "j8"
    codes = (
        run(["census", "6", "--k-all", "--jobs", "1", "--out", str(one)])[0],
        run(["census", "6", "--k-all", "--jobs", "8", "--out", str(eight)])[0],
    )
    names = sorted(p.name for p in one.iterdir())
    same_files = names == sorted(p.name for p in eight.iterdir()) and all(
        (one / f).read_bytes() == (eight / f).read_bytes() for f in names
    )
    seeded = [
        ["generate", "random", "6", "--seed", "42"],
        ["generate", "random", "40", "--seed", "123456789"],
        ["optimize", "-m", "4", "-k", "3", "--iters", "500", "--starts", "2", "--seed", "7"],
        ["census", "4", "--k-all"],
    ]
    reproducible = all(run(argv) == run(argv) for argv in seeded)
    ok = codes == (0, 0) and same_files and reproducible
    report(10, "census --jobs 1 vs 8 byte-identical; seeded commands reproducible", ok,
           f"files={len(names)} identical={same_files} reruns_identical={reproducible}")
