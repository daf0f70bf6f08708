"""CLI invocations pinned by golden files in tests/golden/.

Regenerate with ``python tests/cli_cases.py`` after an intentional output
change, then review the diff.
"""

import contextlib
import io
import sys
from pathlib import Path

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CASES = {
    "count_c3_dfs_check": ["count", "c3.trn", "-k", "2", "--engine", "dfs", "--check"],
    "count_bad_antisym": ["count", "bad_antisym.trn", "-k", "1"],
    "count_bad_trailing": ["count", "bad_trailing.trn", "-k", "1"],
    "count_missing_file": ["count", "nope.trn", "-k", "1"],
    "count_trans4_dp": ["count", "trans4.trn", "-k", "3", "--engine", "subset-dp"],
    "count_rand6_walks_check": ["count", "rand6.trn", "-k", "4", "--engine", "walks", "--check"],
    "count_paley7_dp_check": ["count", "paley7.trn", "-k", "6", "--engine", "subset-dp", "--check"],
    "generate_transitive3": ["generate", "transitive", "3"],
    "generate_rotational5": ["generate", "rotational", "5"],
    "generate_paley5": ["generate", "paley", "5"],
    "generate_paley7": ["generate", "paley", "7"],
    "generate_random6": ["generate", "random", "6", "--seed", "42"],
    "generate_random_noseed": ["generate", "random", "6"],
    "kernel_half_k4": ["kernel", "half.knl", "-k", "4", "--density", "--trace", "--regularity-gap"],
    "kernel_upper3_k2": ["kernel", "upper3.knl", "-k", "2", "--density", "--trace", "--regularity-gap"],
    "kernel_rand5_k5": ["kernel", "rand5.knl", "-k", "5", "--density", "--trace", "--regularity-gap"],
    "kernel_rand5_default": ["kernel", "rand5.knl", "-k", "1"],
    "kernel_bad_skew": ["kernel", "bad_skew.knl", "-k", "2"],
    "kernel_trace_k1": ["kernel", "half.knl", "-k", "1", "--trace"],
    "census_3_all": ["census", "3", "--k-all"],
    "census_4_k2": ["census", "4", "-k", "2"],
    "census_8": ["census", "8", "--k-all"],
    "stability_trans8_k2": ["stability", "trans8.trn", "-k", "2"],
    "stability_rot5_k2": ["stability", "rot5.trn", "-k", "2"],
    "stability_t1_k0": ["stability", "t1.trn", "-k", "0"],
    "optimize_m1_k2": ["optimize", "-m", "1", "-k", "2", "--seed", "0"],
    "optimize_m3_k2": ["optimize", "-m", "3", "-k", "2", "--iters", "300", "--seed", "5", "--starts", "2"],
    "optimize_step0": ["optimize", "-m", "3", "-k", "2", "--step", "0", "--seed", "0"],
    "optimize_noseed": ["optimize", "-m", "3", "-k", "2"],
}


def run(argv):
    """Run the CLI in-process from the data directory; return (code, stdout, stderr)."""
    from tourpaths.cli import main

    out, err = io.StringIO(), io.StringIO()
    old = Path.cwd()
    import os

    os.chdir(DATA)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = main(argv)
            except SystemExit as exc:  # argparse usage errors
                code = exc.code
    finally:
        os.chdir(old)
    return code, out.getvalue(), err.getvalue()


def render(code, stdout, stderr):
    return f"exit: {code}\n--- stdout\n{stdout}--- stderr\n{stderr}"


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        (GOLDEN / f"{name}.txt").write_text(render(*run(argv)), encoding="utf-8")
        print(name, file=sys.stderr)
