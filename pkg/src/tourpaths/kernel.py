"""Step kernels on [0,1]^2 and the path-density functionals built on them.

A step kernel with ``m`` blocks is constant on the cells of the uniform
m x m grid, so every integral below is a finite average.  Kernels come in
two arithmetic modes: exact (entries are ``Fraction``) for certificate
paths, float64 for fuzzing and optimisation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .paths import count_paths
from .tournament import Tournament, degree_stats

FLOAT_TOL = 1e-12
GRAD_TOL = 1e-6


class KernelError(ValueError):
    pass


class OutOfRange(KernelError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"OutOfRange({i},{j})")


class SkewSumExceeded(KernelError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"SkewSumExceeded({i},{j})")


class KnlParseError(KernelError):
    pass


@dataclass(frozen=True, eq=False)
class StepKernel:
    """Validated kernel.  Build through ``validate_kernel``.

    ``w`` is a tuple of tuples of Fractions in exact mode and a read-only
    float64 array otherwise.
    """

    m: int
    w: object
    exact: bool

    def entry(self, i: int, j: int):
        return self.w[i][j]

    def as_float(self) -> np.ndarray:
        if self.exact:
            return np.array([[float(x) for x in row] for row in self.w])
        return np.array(self.w)

    def __eq__(self, other):
        if not isinstance(other, StepKernel):
            return NotImplemented
        if (self.m, self.exact) != (other.m, other.exact):
            return False
        if self.exact:
            return self.w == other.w
        return bool(np.array_equal(self.w, other.w))

    def __hash__(self):
        return hash((self.m, self.exact))


def validate_kernel(m: int, raw, exact: bool | None = None) -> StepKernel:
    """Check 0 <= w <= 1 and w + w^T <= 1 entrywise.

    ``exact`` defaults to True when every entry is an int or Fraction.
    Float mode tolerates violations up to ``FLOAT_TOL`` and clamps them.
    """
    if m < 1:
        raise KernelError("m must be positive")
    if len(raw) != m or any(len(row) != m for row in raw):
        raise KernelError(f"kernel must be {m} x {m}")
    if exact is None:
        exact = all(isinstance(x, (int, Fraction)) for row in raw for x in row)

    if exact:
        w = [[Fraction(x) for x in row] for row in raw]
        for i in range(m):
            for j in range(m):
                if not 0 <= w[i][j] <= 1:
                    raise OutOfRange(i, j)
        for i in range(m):
            for j in range(i, m):
                if w[i][j] + w[j][i] > 1:
                    raise SkewSumExceeded(i, j)
        return StepKernel(m, tuple(tuple(row) for row in w), True)

    w = np.array(raw, dtype=np.float64)
    bad = ~np.isfinite(w) | (w < -FLOAT_TOL) | (w > 1 + FLOAT_TOL)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise OutOfRange(int(i), int(j))
    w = np.clip(w, 0.0, 1.0)
    skew = w + w.T
    over = np.triu(skew > 1 + FLOAT_TOL)
    if over.any():
        i, j = np.argwhere(over)[0]
        raise SkewSumExceeded(int(i), int(j))
    excess = np.maximum(skew - 1.0, 0.0)
    w = np.clip(w - excess / 2, 0.0, 1.0)
    w.setflags(write=False)
    return StepKernel(m, w, False)


def constant_kernel(m: int, value=Fraction(1, 2)) -> StepKernel:
    return validate_kernel(m, [[value] * m for _ in range(m)])


def tournament_to_kernel(t: Tournament) -> StepKernel:
    raw = [[Fraction(int(t.has_edge(i, j))) for j in range(t.n)] for i in range(t.n)]
    return StepKernel(t.n, tuple(tuple(r) for r in raw), True)


def with_diagonal(kern: StepKernel, value) -> StepKernel:
    """Same kernel with every diagonal block replaced by ``value``."""
    if kern.exact:
        raw = [[Fraction(value) if i == j else x for j, x in enumerate(row)] for i, row in enumerate(kern.w)]
        return validate_kernel(kern.m, raw, exact=True)
    w = np.array(kern.w)
    np.fill_diagonal(w, float(value))
    return validate_kernel(kern.m, w, exact=False)


def _step_forward(kern: StepKernel, g):
    # g'[j] = (1/m) sum_i g[i] w[i][j]
    m = kern.m
    if kern.exact:
        w = kern.w
        return [sum((g[i] * w[i][j] for i in range(m)), Fraction(0)) / m for j in range(m)]
    return (g @ kern.w) / m


def _step_backward(kern: StepKernel, h):
    # h'[i] = (1/m) sum_j w[i][j] h[j]
    m = kern.m
    if kern.exact:
        w = kern.w
        return [sum((w[i][j] * h[j] for j in range(m)), Fraction(0)) / m for i in range(m)]
    return (kern.w @ h) / m


def _ones(kern: StepKernel):
    return [Fraction(1)] * kern.m if kern.exact else np.ones(kern.m)


@dataclass(frozen=True)
class GVector:
    t: int
    g: tuple


def g_recursion(kern: StepKernel, k: int) -> list[GVector]:
    """g_0 = 1 and g_t(y) = integral of g_{t-1}(x) f(x, y) dx, for t = 0..k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    g = _ones(kern)
    out = [GVector(0, tuple(g))]
    for t in range(1, k + 1):
        g = _step_forward(kern, g)
        out.append(GVector(t, tuple(g)))
    return out


def _mean(values, exact: bool):
    if exact:
        return sum(values, Fraction(0)) / len(values)
    total = 0.0
    for x in values:  # fixed ascending order
        total += float(x)
    return total / len(values)


def path_density(kern: StepKernel, k: int):
    """Integral of f(x0,x1) ... f(x_{k-1},x_k) over [0,1]^{k+1}."""
    if k < 1:
        raise ValueError("k must be positive")
    return _mean(g_recursion(kern, k)[-1].g, kern.exact)


def _a_functional(kern: StepKernel, g):
    # (1/m^2) sum_{y,z} g[y]^2 w[y][z]
    m = kern.m
    if kern.exact:
        return sum((g[y] * g[y] * sum(kern.w[y], Fraction(0)) for y in range(m)), Fraction(0)) / (m * m)
    g = np.asarray(g)
    return float((g * g) @ kern.w.sum(axis=1)) / (m * m)


@dataclass(frozen=True)
class ChainStep:
    t: int
    a: object
    ratio: object  # None when the previous functional is 0
    ok: bool


@dataclass(frozen=True)
class ChainTrace:
    k: int
    exact: bool
    edge_density: object
    a0: object
    steps: tuple[ChainStep, ...]
    density: object
    sqrt_a_last: float
    cs_bound: float
    edge_ok: bool
    cs_ok: bool
    bound_ok: bool

    @property
    def ratios_ok(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def passed(self) -> bool:
        return self.edge_ok and self.ratios_ok and self.cs_ok and self.bound_ok


def chain_trace(kern: StepKernel, k: int) -> ChainTrace:
    """Trace A_t = integral of g_t(y)^2 f(y,z) for t = 0..k-1 and the final comparison.

    Checks A_t <= A_{t-1}/4 at every step, e <= 1/2, and
    density <= sqrt(A_{k-1} e) <= 2^{-k}.  Exact mode compares squares, so
    no square root is ever taken on the certificate path.
    """
    if k < 2:
        raise ValueError("chain trace needs k >= 2")
    exact = kern.exact
    tol = 0 if exact else FLOAT_TOL
    gs = g_recursion(kern, k)
    e = _a_functional(kern, gs[0].g)
    prev = e
    steps = []
    for t in range(1, k):
        a = _a_functional(kern, gs[t].g)
        ratio = None if prev == 0 else a / prev
        steps.append(ChainStep(t, a, ratio, a <= prev / 4 + tol))
        prev = a
    density = _mean(gs[k].g, exact)
    prod = prev * e
    if exact:
        cs_ok = density * density <= prod
        bound_ok = prod <= Fraction(1, 4**k)
    else:
        cs_ok = density <= math.sqrt(prod) + tol
        bound_ok = math.sqrt(prod) <= 2.0**-k + tol
    return ChainTrace(
        k=k,
        exact=exact,
        edge_density=e,
        a0=e,
        steps=tuple(steps),
        density=density,
        sqrt_a_last=math.sqrt(prev),
        cs_bound=math.sqrt(prod),
        edge_ok=e <= Fraction(1, 2) + tol,
        cs_ok=bool(cs_ok),
        bound_ok=bool(bound_ok),
    )


def in_densities(kern: StepKernel):
    """d[i] = (1/m) sum_x w[x][i]."""
    return list(_step_forward(kern, _ones(kern)))


def out_densities(kern: StepKernel):
    return list(_step_backward(kern, _ones(kern)))


def _gap(d, exact):
    return _mean([abs(1 - 2 * x) for x in d], exact)


def regularity_gap(kern: StepKernel):
    """Mean over blocks of |1 - 2 d(x)| using in-densities; 0 iff all are 1/2."""
    return _gap(in_densities(kern), kern.exact)


def out_regularity_gap(kern: StepKernel):
    return _gap(out_densities(kern), kern.exact)


@dataclass(frozen=True)
class StabilityCertificate:
    n: int
    k: int
    epsilon: Fraction
    bound: Fraction
    count: int

    @property
    def passed(self) -> bool:
        return self.count <= self.bound


def stability_bound(n: int, k: int, epsilon: Fraction) -> Fraction:
    return (1 - 2 * epsilon * epsilon) * Fraction(n ** (k + 1), 2**k)


def stability_check(t: Tournament, k: int, count: int | None = None) -> StabilityCertificate:
    """Compare the k-edge path count with (1 - 2 eps^2) n (n/2)^k, exactly."""
    eps = degree_stats(t).epsilon
    if count is None:
        count = count_paths(t, k)
    return StabilityCertificate(t.n, k, eps, stability_bound(t.n, k, eps), count)


# ---------------------------------------------------------------- optimiser


def density_gradient(w: np.ndarray, k: int) -> tuple[float, np.ndarray]:
    """Path density of a float kernel matrix and its gradient in every entry.

    The density is multilinear in w; the k factor positions give
    d/dw[a][b] = (1/m^2) sum_t forward_t[a] backward_{k-1-t}[b].
    """
    m = w.shape[0]
    fwd = [np.ones(m)]
    bwd = [np.ones(m)]
    for _ in range(k):
        fwd.append(fwd[-1] @ w / m)
        bwd.append(w @ bwd[-1] / m)
    density = float(fwd[k].mean())
    grad = np.zeros((m, m))
    for t in range(k):
        grad += np.outer(fwd[t], bwd[k - 1 - t])
    return density, grad / (m * m)


@dataclass(frozen=True)
class OptimizeResult:
    kernel: StepKernel
    density: float
    gap: float
    regularity_gap: float
    seed: int
    start: int = 0
    history: tuple = field(default=(), repr=False)


def _ascend(m: int, k: int, iterations: int, step_size: float, rng: np.random.Generator):
    # w = 1/2 + s with s antisymmetric, |s| <= 1/2, diagonal pinned at 1/2
    iu = np.triu_indices(m, 1)
    p = rng.uniform(-0.5, 0.5, size=len(iu[0]))
    s = np.zeros((m, m))
    best_d, best_w = -1.0, None
    for _ in range(iterations + 1):
        s[iu] = p
        s.T[iu] = -p
        w = 0.5 + s
        d, grad = density_gradient(w, k)
        if d > best_d:
            best_d, best_w = d, w.copy()
        # chain rule through s[a][b] = p, s[b][a] = -p
        p = np.clip(p + step_size * (grad[iu] - grad.T[iu]), -0.5, 0.5)
    return best_d, best_w


def maximize_density(
    m: int,
    k: int,
    iterations: int = 5000,
    step_size: float = 4.0,
    seed: int = 0,
    starts: int = 1,
) -> OptimizeResult:
    """Projected gradient ascent of the k-edge path density over m-block kernels.

    Each start draws its own stream from ``SeedSequence(seed).spawn``; the
    best iterate across all starts is returned (earliest start on ties).
    """
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    if not iterations > 0:
        raise ValueError("iterations must be positive")
    if not step_size > 0 or not math.isfinite(step_size):
        raise ValueError("step size must be a positive finite number")
    if starts < 1:
        raise ValueError("starts must be positive")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must lie in [0, 2**64)")

    best = None
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(starts)):
        d, w = _ascend(m, k, iterations, step_size, np.random.default_rng(child))
        if best is None or d > best[0]:
            best = (d, w, i)
    d, w, i = best
    kern = validate_kernel(m, w, exact=False)
    return OptimizeResult(
        kernel=kern,
        density=d,
        gap=2.0**-k - d,
        regularity_gap=float(regularity_gap(kern)),
        seed=seed,
        start=i,
    )


# ---------------------------------------------------------------- .knl format

_RAT_RE = re.compile(r"[+-]?[0-9]+/[0-9]+")
_DEC_RE = re.compile(r"[+-]?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?")


def parse_knl(text: str) -> StepKernel:
    """Parse the ``.knl`` format.  Any "p/q" token makes the whole kernel exact."""
    lines = text.rstrip("\n").split("\n")
    if not lines or not re.fullmatch(r"[0-9]+", lines[0].strip()):
        raise KnlParseError("first line must be a decimal block count")
    m = int(lines[0])
    if m < 1:
        raise KnlParseError("block count must be positive")
    if len(lines) != m + 1:
        raise KnlParseError(f"expected {m} rows, found {len(lines) - 1}")
    tokens = []
    for i, line in enumerate(lines[1:]):
        row = line.split()
        if len(row) != m:
            raise KnlParseError(f"row {i} must have {m} entries")
        for tok in row:
            if not (_RAT_RE.fullmatch(tok) or _DEC_RE.fullmatch(tok)):
                raise KnlParseError(f"bad number {tok!r} in row {i}")
        tokens.append(row)
    exact = any("/" in tok for row in tokens for tok in row)
    try:
        if exact:
            raw = [[Fraction(tok) for tok in row] for row in tokens]
        else:
            raw = [[float(tok) for tok in row] for row in tokens]
    except (ValueError, ZeroDivisionError) as exc:
        raise KnlParseError(str(exc)) from None
    return validate_kernel(m, raw, exact=exact)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def serialize_knl(kern: StepKernel) -> str:
    if kern.exact:
        rows = [" ".join(format_rational(x) for x in row) for row in kern.w]
    else:
        rows = [" ".join(format(float(x), ".17g") for x in row) for row in kern.w]
    return "\n".join([str(kern.m), *rows]) + "\n"


def read_knl(path) -> StepKernel:
    with open(path, encoding="utf-8") as fh:
        return parse_knl(fh.read())


def random_kernel(m: int, rng: np.random.Generator, boundary: bool = False) -> StepKernel:
    """Random valid float kernel.

    Entries are drawn uniformly and each pair (i,j),(j,i) is scaled down
    until its sum is at most 1.  With ``boundary`` the off-diagonal pairs sum
    to exactly 1 instead (the tournament-limit case).
    """
    u = rng.uniform(0.0, 1.0, size=(m, m))
    if boundary:
        s = np.triu(u - 0.5, 1)
        w = 0.5 + s - s.T
        np.fill_diagonal(w, rng.uniform(0.0, 0.5, size=m))
    else:
        w = u / np.maximum(1.0, u + u.T)
    return validate_kernel(m, w, exact=False)
