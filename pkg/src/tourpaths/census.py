"""Exhaustive census over all labeled tournaments on n <= 7 vertices.

Tournament number ``c`` (0 <= c < 2**(n(n-1)/2)) is ``Tournament.decode(n, c)``.
The code range is split into contiguous chunks, each chunk is reduced to
per-k extrema by the compiled sweep, and the partial results are merged.
Merging keeps the smallest code on ties, so the outcome does not depend on
how the range was split.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from ._backend import kernels
from .paths import bounds, within_upper
from .tournament import Tournament, serialize

MAX_CENSUS_VERTICES = 7


class CensusInfeasible(ValueError):
    pass


class RecordConflict(RuntimeError):
    """A persisted record differs from the freshly computed one."""


def _guard(n: int, force: bool) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_CENSUS_VERTICES and not force:
        raise CensusInfeasible(
            f"census over n={n} scans 2**{n * (n - 1) // 2} tournaments; pass force=True to run it anyway"
        )


def enumerate_labeled(n: int, force: bool = False) -> Iterator[Tournament]:
    """Every labeled n-vertex tournament once, in increasing code order."""
    _guard(n, force)
    for code in range(1 << (n * (n - 1) // 2)):
        yield Tournament.decode(n, code)


@dataclass
class _Partial:
    mins: list
    maxs: list
    min_codes: list
    max_codes: list
    tmins: list
    tmaxs: list
    ties: list
    n_trans: int
    scanned: int


def _scan(args) -> _Partial:
    n, start, stop = args
    mins, maxs, min_codes, max_codes, tmins, tmaxs, ties, n_trans = kernels.census_range(n, start, stop)
    return _Partial(
        [int(x) for x in mins],
        [int(x) for x in maxs],
        [int(x) for x in min_codes],
        [int(x) for x in max_codes],
        [int(x) for x in tmins],
        [int(x) for x in tmaxs],
        [int(x) for x in ties],
        int(n_trans),
        stop - start,
    )


def _merge(a: _Partial, b: _Partial) -> _Partial:
    out = _Partial([], [], [], [], [], [], [], a.n_trans + b.n_trans, a.scanned + b.scanned)
    for k in range(len(a.mins)):
        if (a.mins[k], a.min_codes[k]) <= (b.mins[k], b.min_codes[k]):
            lo, lo_code = a.mins[k], a.min_codes[k]
        else:
            lo, lo_code = b.mins[k], b.min_codes[k]
        ties = (a.ties[k] if a.mins[k] == lo else 0) + (b.ties[k] if b.mins[k] == lo else 0)
        # largest count, smallest code among those
        if (-a.maxs[k], a.max_codes[k]) <= (-b.maxs[k], b.max_codes[k]):
            hi, hi_code = a.maxs[k], a.max_codes[k]
        else:
            hi, hi_code = b.maxs[k], b.max_codes[k]
        out.mins.append(lo)
        out.min_codes.append(lo_code)
        out.ties.append(ties)
        out.maxs.append(hi)
        out.max_codes.append(hi_code)
        out.tmins.append(min(a.tmins[k], b.tmins[k]))
        out.tmaxs.append(max(a.tmaxs[k], b.tmaxs[k]))
    return out


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    edges = [total * i // parts for i in range(parts + 1)]
    return [(edges[i], edges[i + 1]) for i in range(parts)]


def sweep(n: int, jobs: int = 1, force: bool = False) -> _Partial:
    _guard(n, force)
    total = 1 << (n * (n - 1) // 2)
    # more chunks than workers keeps the pool busy; the split never changes the result
    ranges = _chunks(total, 1 if jobs <= 1 else 4 * jobs)
    tasks = [(n, a, b) for a, b in ranges]
    if jobs <= 1:
        parts = [_scan(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan, tasks))
    result = parts[0]
    for p in parts[1:]:
        result = _merge(result, p)
    return result


@dataclass(frozen=True)
class CensusRecord:
    n: int
    k: int
    min_count: int
    max_count: int
    min_witness: str
    max_witness: str
    upper: Fraction
    lower: int
    tournaments_scanned: int
    transitive_count: int
    transitive_min: int
    transitive_max: int
    nontransitive_min_ties: int

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "lower_le_min": self.lower <= self.min_count,
            "min_equals_lower": self.min_count == self.lower,
            "max_within_upper": within_upper(self.max_count, self.n, self.k),
            "transitive_attain_lower": self.transitive_min == self.transitive_max == self.lower,
            "transitive_count": self.transitive_count == math.factorial(self.n),
            "scan_complete": self.tournaments_scanned == 1 << (self.n * (self.n - 1) // 2),
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        """Fixed field order; counts as decimal strings, the bound as a lowest-terms rational."""
        obj = {
            "n": self.n,
            "k": self.k,
            "min_count": str(self.min_count),
            "max_count": str(self.max_count),
            "upper": str(self.upper),
            "lower": str(self.lower),
            "witnesses": {"min": self.min_witness, "max": self.max_witness},
            "tournaments_scanned": str(self.tournaments_scanned),
            "transitive_count": str(self.transitive_count),
            "nontransitive_min_ties": str(self.nontransitive_min_ties),
            "checks": self.checks,
            "passed": self.passed,
        }
        return json.dumps(obj, indent=2) + "\n"


def _record(n: int, k: int, part: _Partial) -> CensusRecord:
    b = bounds(n, k)
    return CensusRecord(
        n=n,
        k=k,
        min_count=part.mins[k],
        max_count=part.maxs[k],
        min_witness=serialize(Tournament.decode(n, part.min_codes[k])),
        max_witness=serialize(Tournament.decode(n, part.max_codes[k])),
        upper=b.upper,
        lower=b.lower,
        tournaments_scanned=part.scanned,
        transitive_count=part.n_trans,
        transitive_min=part.tmins[k],
        transitive_max=part.tmaxs[k],
        nontransitive_min_ties=part.ties[k],
    )


@dataclass(frozen=True)
class HamiltonRecord:
    n: int
    min_h: int
    max_h: int
    szele_lower: int
    max_witness: str

    @property
    def checks(self) -> dict[str, bool]:
        return {"min_h_at_least_1": self.min_h >= 1, "max_h_at_least_szele": self.max_h >= self.szele_lower}

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        obj = {
            "n": self.n,
            "min_H": str(self.min_h),
            "max_H": str(self.max_h),
            "szele_lower": str(self.szele_lower),
            "max_witness": self.max_witness,
            "checks": self.checks,
            "passed": self.passed,
        }
        return json.dumps(obj, indent=2) + "\n"


def szele_lower(n: int) -> int:
    """ceil(n! / 2**(n-1))."""
    return -(-math.factorial(n) // 2 ** (n - 1))


def census_all(n: int, jobs: int = 1, force: bool = False) -> tuple[list[CensusRecord], HamiltonRecord]:
    """One sweep, records for every k = 0..n-1 plus the Hamilton summary."""
    part = sweep(n, jobs, force)
    records = [_record(n, k, part) for k in range(n)]
    last = n - 1
    ham = HamiltonRecord(
        n=n,
        min_h=part.mins[last],
        max_h=part.maxs[last],
        szele_lower=szele_lower(n),
        max_witness=serialize(Tournament.decode(n, part.max_codes[last])),
    )
    return records, ham


def census(n: int, k: int, jobs: int = 1, force: bool = False) -> CensusRecord:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= n:
        _guard(n, force)
        b = bounds(n, k)
        # no k-edge path exists; every tournament counts 0
        empty = serialize(Tournament.decode(n, 0))
        total = 1 << (n * (n - 1) // 2)
        return CensusRecord(n, k, 0, 0, empty, empty, b.upper, b.lower, total, math.factorial(n), 0, 0, total - math.factorial(n))
    return census_all(n, jobs, force)[0][k]


def hamilton_census(n: int, jobs: int = 1, force: bool = False) -> HamiltonRecord:
    return census_all(n, jobs, force)[1]


CSV_FIELDS = ["n", "k", "min_count", "max_count", "upper", "lower", "tournaments_scanned", "nontransitive_min_ties", "passed"]


def records_csv(records: list[CensusRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow(
            [r.n, r.k, r.min_count, r.max_count, str(r.upper), r.lower, r.tournaments_scanned, r.nontransitive_min_ties, "pass" if r.passed else "fail"]
        )
    return buf.getvalue()


def _persist(path: Path, payload: str, force: bool) -> None:
    if path.exists() and not force:
        old = path.read_text(encoding="utf-8")
        if old != payload:
            raise RecordConflict(f"{path} holds a different record; rerun with force to overwrite")
        return
    path.write_text(payload, encoding="utf-8")


def write_records(out_dir, records: list[CensusRecord], ham: HamiltonRecord | None = None, force: bool = False) -> list[Path]:
    """Persist one JSON file per (n, k), a CSV summary, and the Hamilton record.

    An existing file is left alone when identical and refused when it
    differs, unless ``force`` is set.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for r in records:
        p = out / f"census_n{r.n}_k{r.k}.json"
        _persist(p, r.to_json(), force)
        written.append(p)
    if records:
        ks = "-".join(str(r.k) for r in records) if len(records) < records[0].n else "all"
        p = out / f"census_n{records[0].n}_{ks}.csv"
        _persist(p, records_csv(records), force)
        written.append(p)
    if ham is not None:
        p = out / f"hamilton_n{ham.n}.json"
        _persist(p, ham.to_json(), force)
        written.append(p)
    return written
