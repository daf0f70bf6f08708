"""Tournaments stored as per-vertex out-neighbour bitmasks.

Vertices are ``0..n-1``.  Row ``i`` is a Python int whose bit ``j`` is set
iff the edge is oriented ``i -> j``.  Python ints have no width limit, so
the same representation serves every n; ``rows_u64`` hands the rows to the
compiled kernels when n <= 64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class TournamentError(ValueError):
    """Input does not describe a tournament, or a generator precondition fails."""


class SelfLoop(TournamentError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"SelfLoop({i})")


class NotAntisymmetric(TournamentError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"NotAntisymmetric({i},{j})")


class NotSquare(TournamentError):
    pass


class NotOdd(TournamentError):
    pass


class NotPrime(TournamentError):
    pass


class BadResidue(TournamentError):
    pass


class TrnParseError(TournamentError):
    pass


def _check_rows(n: int, rows: Sequence[int]) -> None:
    if len(rows) != n:
        raise NotSquare(f"expected {n} rows, got {len(rows)}")
    for i, r in enumerate(rows):
        if r < 0 or r >> n:
            raise NotSquare(f"row {i} has bits outside 0..{n - 1}")
        if (r >> i) & 1:
            raise SelfLoop(i)
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            if ((ri >> j) & 1) == ((rows[j] >> i) & 1):
                raise NotAntisymmetric(i, j)


@dataclass(frozen=True)
class Tournament:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise TournamentError("a tournament needs at least one vertex")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        _check_rows(self.n, self.rows)

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def out_neighbors(self, i: int) -> list[int]:
        r = self.rows[i]
        return [j for j in range(self.n) if (r >> j) & 1]

    def outdegrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    def indegrees(self) -> tuple[int, ...]:
        return tuple(self.n - 1 - d for d in self.outdegrees())

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in self.out_neighbors(i)]

    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges():
            a[i, j] = True
        return a

    def rows_u64(self) -> np.ndarray:
        if self.n > 64:
            raise ValueError("uint64 rows need n <= 64")
        return np.array(self.rows, dtype=np.uint64)

    def encode(self) -> int:
        """Upper-triangle code: bit p is set iff the p-th pair (i<j) is i -> j."""
        code, p = 0, 0
        for i in range(self.n):
            r = self.rows[i]
            for j in range(i + 1, self.n):
                if (r >> j) & 1:
                    code |= 1 << p
                p += 1
        return code

    @classmethod
    def decode(cls, n: int, code: int) -> "Tournament":
        if n < 1:
            raise TournamentError("n must be positive")
        npairs = n * (n - 1) // 2
        if code < 0 or code >> npairs:
            raise TournamentError(f"code {code} out of range for n={n}")
        rows = [0] * n
        p = 0
        for i in range(n):
            for j in range(i + 1, n):
                if (code >> p) & 1:
                    rows[i] |= 1 << j
                else:
                    rows[j] |= 1 << i
                p += 1
        return cls(n, tuple(rows))

    def to_trn(self) -> str:
        return serialize(self)

    def __str__(self):
        return f"Tournament(n={self.n}, code={self.encode()})"


def validate(raw_adjacency) -> Tournament:
    """Build a Tournament from an n x n 0/1 matrix, checking both invariants."""
    a = np.asarray(raw_adjacency)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"adjacency must be square, got shape {a.shape}")
    n = a.shape[0]
    if n < 1:
        raise NotSquare("adjacency is empty")
    if not np.all((a == 0) | (a == 1)):
        raise TournamentError("adjacency entries must be 0 or 1")
    a = a.astype(bool)
    for i in range(n):
        if a[i, i]:
            raise SelfLoop(i)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] == a[j, i]:
                raise NotAntisymmetric(i, j)
    rows = tuple(sum(1 << int(j) for j in np.flatnonzero(a[i])) for i in range(n))
    return Tournament(n, rows)


def transitive(n: int) -> Tournament:
    if n < 1:
        raise TournamentError("n must be positive")
    full = (1 << n) - 1
    # i beats every j > i
    return Tournament(n, tuple(full & ~((1 << (i + 1)) - 1) for i in range(n)))


def rotational(n: int) -> Tournament:
    """Circulant tournament: i -> i+1, ..., i+(n-1)/2 (mod n)."""
    if n < 1 or n % 2 == 0:
        raise NotOdd(f"rotational tournament needs odd n, got {n}")
    half = (n - 1) // 2
    rows = tuple(sum(1 << ((i + d) % n) for d in range(1, half + 1)) for i in range(n))
    return Tournament(n, rows)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def paley(q: int) -> Tournament:
    """Paley tournament: i -> j iff j - i is a nonzero square mod q."""
    if not _is_prime(q):
        raise NotPrime(f"q = {q} is not prime")
    if q % 4 != 3:
        raise BadResidue(f"q ≢ 3 mod 4 (q = {q})")
    residues = {(x * x) % q for x in range(1, q)}
    rows = tuple(sum(1 << ((i + d) % q) for d in residues) for i in range(q))
    return Tournament(q, rows)


def random_tournament(n: int, seed: int) -> Tournament:
    """Uniform random tournament from numpy's PCG64 seeded with ``seed``.

    One fair bit per pair, drawn in upper-triangle order, so the result is
    ``Tournament.decode(n, code)`` for the code those bits spell out.
    """
    if n < 1:
        raise TournamentError("n must be positive")
    if not 0 <= seed < 2**64:
        raise TournamentError("seed must lie in [0, 2**64)")
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = rng.integers(0, 2, size=n * (n - 1) // 2, dtype=np.uint8)
    rows = [0] * n
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            if bits[p]:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            p += 1
    return Tournament(n, tuple(rows))


@dataclass(frozen=True)
class DegreeStats:
    indegrees: tuple[int, ...]
    outdegrees: tuple[int, ...]
    deviation_sum: Fraction
    epsilon: Fraction


def degree_stats(t: Tournament) -> DegreeStats:
    ind = t.indegrees()
    half = Fraction(t.n, 2)
    dev = sum((abs(d - half) for d in ind), Fraction(0))
    return DegreeStats(ind, t.outdegrees(), dev, dev / (t.n * t.n))


_INT_RE = re.compile(r"[0-9]+")
_ROW_RE = re.compile(r"[01]*")


def serialize(t: Tournament) -> str:
    lines = [str(t.n)]
    for i in range(t.n):
        r = t.rows[i]
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(t.n)))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Tournament:
    """Parse the ``.trn`` format; anything beyond one final newline is rejected."""
    if text.endswith("\n"):
        text = text[:-1]
    lines = text.split("\n")
    if not lines or not _INT_RE.fullmatch(lines[0]):
        raise TrnParseError("first line must be a decimal vertex count")
    n = int(lines[0])
    if n < 1:
        raise TrnParseError("vertex count must be positive")
    if len(lines) != n + 1:
        raise TrnParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    matrix = []
    for i, line in enumerate(lines[1:]):
        if len(line) != n or not _ROW_RE.fullmatch(line):
            raise TrnParseError(f"row {i} must be {n} characters of 0/1")
        matrix.append([c == "1" for c in line])
    return validate(matrix)


def read_trn(path) -> Tournament:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse(fh.read())


def write_trn(t: Tournament, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize(t))
