import json
import subprocess
import sys

import pytest

from cli_cases import CASES, DATA, GOLDEN, render, run
from tourpaths import kernel as kmod
from tourpaths.tournament import random_tournament, serialize


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    expected = (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")
    assert render(*run(CASES[name])) == expected


def test_exit_codes_are_within_contract():
    for argv in CASES.values():
        assert run(argv)[0] in (0, 1, 2, 3)


def _report(argv):
    code, out, _ = run(argv)
    return code, json.loads(out)


def test_count_example_values():
    code, rep = _report(["count", "c3.trn", "-k", "2", "--engine", "dfs", "--check"])
    assert code == 0 and rep["results"]["count"] == "3" and rep["status"] == "pass"
    code, _, err = run(["count", "bad_antisym.trn", "-k", "1"])
    assert code == 2 and err.strip() == "error: NotAntisymmetric(0,1)"
    code, rep = _report(["count", "trans4.trn", "-k", "3", "--engine", "subset-dp"])
    assert rep["results"]["count"] == "1"


def test_count_engine_infeasible(tmp_path):
    path = tmp_path / "big.trn"
    path.write_text(serialize(random_tournament(25, 1)))
    code, _, err = run(["count", str(path), "-k", "2", "--engine", "subset-dp"])
    assert code == 3 and err.startswith("error:")
    code, rep = _report(["count", str(path), "-k", "2", "--engine", "dfs"])
    assert code == 0


def test_generate_examples():
    code, out, _ = run(["generate", "transitive", "3"])
    assert out == "3\n011\n001\n000\n"
    code, _, err = run(["generate", "paley", "5"])
    assert code == 2 and "≢ 3 mod 4" in err
    first = run(["generate", "random", "6", "--seed", "42"])
    assert first == run(["generate", "random", "6", "--seed", "42"])
    assert first[1] == serialize(random_tournament(6, 42))


def test_kernel_examples():
    code, rep = _report(["kernel", "half.knl", "-k", "4", "--density", "--trace"])
    assert code == 0
    assert rep["results"]["density"] == "1/16"
    assert {s["ratio"] for s in rep["results"]["trace"]["steps"]} == {"1/4"}
    code, rep = _report(["kernel", "rand5.knl", "-k", "5"])
    assert code == 0 and float(rep["results"]["density"]) <= 1 / 32 + 1e-12
    assert run(["kernel", "bad_skew.knl", "-k", "2"])[0] == 2


def test_kernel_violation_exits_1(monkeypatch):
    monkeypatch.setattr(kmod, "path_density", lambda kern, k: 1)
    code, rep = _report(["kernel", "half.knl", "-k", "2", "--density"])
    assert code == 1
    assert rep["status"] == "fail"
    assert "bug" in rep["results"]["note"]


def test_census_examples():
    code, rep = _report(["census", "3", "--k-all"])
    assert code == 0
    recs = rep["results"]["records"]
    assert [r["k"] for r in recs] == [0, 1, 2]
    assert (recs[2]["min_count"], recs[2]["max_count"]) == ("1", "3")
    assert run(["census", "8", "--k-all"])[0] == 3


def test_census_persistence_and_jobs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["census", "5", "--k-all", "--jobs", "1", "--out", str(a)])[0] == 0
    assert run(["census", "5", "--k-all", "--jobs", "3", "--out", str(b)])[0] == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert "census_n5_all.csv" in names and "hamilton_n5.json" in names
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    # a tampered record blocks the rerun unless forced
    rec = a / "census_n5_k2.json"
    rec.write_text(rec.read_text().replace('"lower": "10"', '"lower": "11"'))
    assert run(["census", "5", "--k-all", "--out", str(a)])[0] == 1
    assert run(["census", "5", "--k-all", "--out", str(a), "--force"])[0] == 0
    assert rec.read_bytes() == (b / "census_n5_k2.json").read_bytes()


def test_stability_examples():
    code, rep = _report(["stability", "trans8.trn", "-k", "2"])
    r = rep["results"]
    assert (code, r["epsilon"], r["bound"], r["count"]) == (0, "1/4", "112", "56")
    code, rep = _report(["stability", "rot5.trn", "-k", "2"])
    assert code == 0 and rep["status"] == "pass"
    code, rep = _report(["stability", "t1.trn", "-k", "0"])
    r = rep["results"]
    assert (code, r["epsilon"], r["count"], r["bound"], rep["status"]) == (1, "1/2", "1", "1/2", "fail")


def test_optimize_examples(tmp_path):
    out = tmp_path / "best.knl"
    code, rep = _report(["optimize", "-m", "4", "-k", "3", "--iters", "5000", "--starts", "4", "--seed", "3", "--out", str(out)])
    assert code == 0
    assert float(rep["results"]["gap"]) <= 1e-4
    assert kmod.read_knl(out) == kmod.parse_knl(rep["results"]["kernel"])
    code, rep = _report(["optimize", "-m", "1", "-k", "2", "--seed", "0"])
    assert rep["results"]["density"] == "0.25"
    assert run(["optimize", "-m", "3", "-k", "2", "--step", "0", "--seed", "0"])[0] == 2


def test_seeded_commands_are_reproducible():
    argv = ["optimize", "-m", "3", "-k", "3", "--iters", "200", "--seed", "17", "--starts", "3"]
    assert run(argv) == run(argv)


def test_floats_round_trip():
    _, rep = _report(["kernel", "rand5.knl", "-k", "5", "--trace"])
    for step in rep["results"]["trace"]["steps"]:
        x = float(step["A_t"])
        assert format(x, ".17g") == step["A_t"]


def test_timing_flag_adds_wall_time():
    _, rep = _report(["--timing", "count", "c3.trn", "-k", "1"])
    assert float(rep["wall_time_s"]) >= 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tourpaths", "count", "c3.trn", "-k", "2"],
        cwd=DATA, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["count"] == "3"
