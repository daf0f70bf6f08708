"""Command-line interface: ``tourpaths {count,generate,kernel,census,stability,optimize}``.

Every command except ``generate`` prints a JSON run report with a fixed
key order.  Counts are decimal strings, rationals "p/q" in lowest terms
(integers without the "/1"),
floats 17 significant digits.

Exit codes: 0 success, 1 a checked inequality failed, 2 bad input or
arguments, 3 instance too large for the requested engine.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import kernel as kmod
from . import paths, tournament
from .census import MAX_CENSUS_VERTICES, RecordConflict, census, census_all, write_records

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt_rational(x) -> str:
    """Lowest terms, positive denominator; integers print without "/1"."""
    return str(Fraction(x))


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def fmt_value(x, exact: bool) -> str:
    return fmt_rational(x) if exact else fmt_float(x)


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from None


def _load_tournament(path: str) -> tournament.Tournament:
    text = _read_text(path)
    try:
        return tournament.parse(text)
    except tournament.TournamentError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _load_kernel(path: str) -> kmod.StepKernel:
    text = _read_text(path)
    try:
        return kmod.parse_knl(text)
    except kmod.KernelError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _report(argv, inputs, results, assertions) -> dict:
    return {
        "command": list(argv),
        "inputs": inputs,
        "results": results,
        "assertions": {name: _verdict(ok) for name, ok in assertions.items()},
        "status": _verdict(all(assertions.values())),
    }


# ---------------------------------------------------------------- commands


def cmd_count(args):
    t = _load_tournament(args.file)
    if args.k < 0:
        raise CliError(EXIT_INPUT, "k must be nonnegative")
    if args.engine == "subset-dp" and t.n > paths.MAX_DP_VERTICES:
        raise CliError(EXIT_INFEASIBLE, f"subset-dp engine limited to n <= {paths.MAX_DP_VERTICES}, got n={t.n}")
    cert = paths.check_theorem1(t, args.k, engine=args.engine)
    results = {"n": t.n, "k": args.k, "engine": args.engine, "count": str(cert.count)}
    assertions = {}
    if args.check:
        results["upper"] = fmt_rational(cert.upper)
        results["lower"] = str(cert.lower)
        assertions = {"lower_le_count": cert.lower_ok, "count_le_upper": cert.upper_ok}
    return [_digest(args.file)], results, assertions


def cmd_generate(args):
    try:
        if args.kind == "transitive":
            t = tournament.transitive(args.n)
        elif args.kind == "rotational":
            t = tournament.rotational(args.n)
        elif args.kind == "paley":
            t = tournament.paley(args.n)
        else:
            if args.seed is None:
                raise CliError(EXIT_INPUT, "random tournaments need an explicit --seed")
            t = tournament.random_tournament(args.n, args.seed)
    except tournament.TournamentError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    sys.stdout.write(tournament.serialize(t))
    return None


def cmd_kernel(args):
    kern = _load_kernel(args.file)
    k = args.k
    if k < 1:
        raise CliError(EXIT_INPUT, "k must be positive")
    if args.trace and k < 2:
        raise CliError(EXIT_INPUT, "--trace needs k >= 2")
    want_density = args.density or not (args.trace or args.regularity_gap)
    exact = kern.exact
    results = {"m": kern.m, "k": k, "mode": "exact" if exact else "float", "bound": fmt_rational(Fraction(1, 2**k))}
    assertions = {}
    if want_density:
        d = kmod.path_density(kern, k)
        results["density"] = fmt_value(d, exact)
        limit = Fraction(1, 2**k) if exact else 2.0**-k + kmod.FLOAT_TOL
        assertions["density_le_bound"] = d <= limit
    if args.trace:
        tr = kmod.chain_trace(kern, k)
        results["trace"] = {
            "edge_density": fmt_value(tr.edge_density, exact),
            "steps": [
                {
                    "t": s.t,
                    "A_t": fmt_value(s.a, exact),
                    "ratio": None if s.ratio is None else fmt_value(s.ratio, exact),
                }
                for s in tr.steps
            ],
            "density": fmt_value(tr.density, exact),
            "sqrt_A_last": fmt_float(tr.sqrt_a_last),
            "cauchy_schwarz_bound": fmt_float(tr.cs_bound),
        }
        assertions["edge_density_le_half"] = tr.edge_ok
        assertions["contraction_quarter"] = tr.ratios_ok
        assertions["cauchy_schwarz"] = tr.cs_ok
        assertions["cs_bound_le_bound"] = tr.bound_ok
    if args.regularity_gap:
        results["regularity_gap"] = fmt_value(kmod.regularity_gap(kern), exact)
    if not all(assertions.values()):
        results["note"] = "an inequality that holds for every valid kernel failed: this is a bug in tourpaths"
    return [_digest(args.file)], results, assertions


def cmd_census(args):
    if args.n > MAX_CENSUS_VERTICES and not args.force:
        raise CliError(
            EXIT_INFEASIBLE,
            f"census limited to n <= {MAX_CENSUS_VERTICES}; pass --force to scan 2**{args.n * (args.n - 1) // 2} tournaments",
        )
    if args.n < 1:
        raise CliError(EXIT_INPUT, "n must be positive")
    if args.jobs < 1:
        raise CliError(EXIT_INPUT, "--jobs must be positive")
    records, ham = census_all(args.n, jobs=args.jobs, force=args.force)
    if not args.k_all:
        if not 0 <= args.k:
            raise CliError(EXIT_INPUT, "k must be nonnegative")
        records = [census(args.n, args.k, force=args.force)] if args.k >= args.n else [records[args.k]]
    if args.out:
        try:
            write_records(args.out, records, ham, force=args.force)
        except RecordConflict as exc:
            raise CliError(EXIT_FAIL, str(exc)) from None
    results = {
        "records": [json.loads(r.to_json()) for r in records],
        "hamilton": json.loads(ham.to_json()),
    }
    assertions = {f"k={r.k}": r.passed for r in records}
    assertions["hamilton"] = ham.passed
    return [], results, assertions


def cmd_stability(args):
    t = _load_tournament(args.file)
    if args.k < 0:
        raise CliError(EXIT_INPUT, "k must be nonnegative")
    cert = kmod.stability_check(t, args.k)
    results = {
        "n": t.n,
        "k": args.k,
        "epsilon": fmt_rational(cert.epsilon),
        "bound": fmt_rational(cert.bound),
        "count": str(cert.count),
    }
    return [_digest(args.file)], results, {"count_le_stability_bound": cert.passed}


def cmd_optimize(args):
    if args.seed is None:
        raise CliError(EXIT_INPUT, "optimize needs an explicit --seed")
    try:
        res = kmod.maximize_density(args.m, args.k, args.iters, args.step, args.seed, args.starts)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    payload = kmod.serialize_knl(res.kernel)
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    results = {
        "m": args.m,
        "k": args.k,
        "iterations": args.iters,
        "step": fmt_float(args.step),
        "seed": str(args.seed),
        "starts": args.starts,
        "best_start": res.start,
        "density": fmt_float(res.density),
        "target": fmt_rational(Fraction(1, 2**args.k)),
        "gap": fmt_float(res.gap),
        "regularity_gap": fmt_float(res.regularity_gap),
        "kernel": payload,
    }
    return [], results, {"density_le_target": res.density <= 2.0**-args.k + 1e-9}


# ---------------------------------------------------------------- parser


def _nonneg_seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tourpaths", description="Directed path counts in tournaments and kernels.")
    parser.add_argument("--timing", action="store_true", help="add wall time to the report (breaks byte-identity)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count directed k-edge paths or walks in a .trn tournament")
    p.add_argument("file")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--engine", choices=["dfs", "subset-dp", "walks"], default="dfs")
    p.add_argument("--check", action="store_true", help="also check binom(n,k+1) <= count <= n^(k+1)/2^k")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("generate", help="write a tournament in .trn format to stdout")
    p.add_argument("kind", choices=["transitive", "rotational", "paley", "random"])
    p.add_argument("n", type=int, help="vertex count (q for paley)")
    p.add_argument("--seed", type=_nonneg_seed)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("kernel", help="path density functionals of a .knl step kernel")
    p.add_argument("file")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--density", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--regularity-gap", action="store_true")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("census", help="exhaustive sweep over all labeled n-vertex tournaments")
    p.add_argument("n", type=int)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--k-all", action="store_true")
    which.add_argument("-k", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("stability", help="compare the path count with the degree-deviation bound")
    p.add_argument("file")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("optimize", help="projected gradient ascent of the path density")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--iters", type=int, default=5000)
    p.add_argument("--step", type=float, default=4.0)
    p.add_argument("--seed", type=_nonneg_seed)
    p.add_argument("--starts", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        out = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except paths.EngineInfeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if out is None:
        return EXIT_OK
    inputs, results, assertions = out
    report = _report(argv, inputs, results, assertions)
    if args.timing:
        report["wall_time_s"] = fmt_float(time.perf_counter() - started)
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
