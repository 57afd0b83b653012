import json
import subprocess
import sys

import pytest

from pi1.cli import CHECKS, main, trial_seed


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_lenard(capsys):
    code, out, _ = run(capsys, "generate", "lenard", "--lmax", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert [l.split(" = ")[0] for l in lines] == ["R_1", "R_3", "R_5", "R_7"]
    assert lines[0] == "R_1 = 1/2*u"


def test_generate_lenard_latex(capsys):
    code, out, _ = run(capsys, "generate", "lenard", "--lmax", "3", "--format", "latex")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "R_{1} = \\frac{1}{2}u"
    assert lines[3].startswith("R_{7} = ") and "\\frac{21}{128}u_{xx}^{2}" in lines[3]


def test_generate_U3(capsys):
    code, out, _ = run(capsys, "generate", "U", "--n", "1")
    assert code == 0
    assert out.startswith("U_3 = ")
    assert "lam^2" in out and "-1/4*u1" in out


def test_generate_hamiltonians_genus_one(capsys):
    code, out, _ = run(capsys, "generate", "hamiltonians", "--g", "1")
    assert code == 0
    assert out.strip() == "Ham^(e_1) = -q1^3 - t1*q1 + p1^2"


def test_generate_oper_L_and_dictionary(capsys):
    code, out, _ = run(capsys, "generate", "oper-L", "--g", "1")
    assert code == 0 and "L21" in out
    code, out, _ = run(capsys, "generate", "dictionary", "--g", "2")
    assert code == 0 and json.loads(out)["genus"] == 2


def test_generate_json_wrapper(capsys):
    code, out, _ = run(capsys, "generate", "Ag", "--g", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["target"] == "Ag"


def test_verify_one_check(capsys):
    code, out, _ = run(capsys, "verify", "lax-identity", "--g", "1", "--seed", "1")
    assert code == 0
    (line,) = out.strip().splitlines()
    rep = json.loads(line)
    assert rep["status"] == "pass" and rep["failures"] == []
    assert rep["elapsed_ms"] is None


def test_verify_all_genus_two(capsys):
    code, out, _ = run(capsys, "verify", "all", "--g", "2", "--seed", "42", "--trials", "20")
    assert code == 0
    reports = [json.loads(l) for l in out.strip().splitlines()]
    assert {r["check"] for r in reports} == set(CHECKS)
    assert all(r["status"] == "pass" for r in reports)


def test_literal_forms_fail_and_replay(capsys, tmp_path):
    report = tmp_path / "rep.jsonl"
    code, _, _ = run(capsys, "verify", "hamiltonians", "--g", "2", "--trials", "2", "--literal", "--out", str(report))
    assert code == 1
    rep = json.loads(report.read_text())
    assert rep["form"] == "literal" and rep["status"] == "fail"
    code, out, _ = run(capsys, "verify", "--replay", str(report))
    assert code == 0
    assert all(json.loads(l)["reproduced"] for l in out.strip().splitlines())


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "all", "--g", "0"],
        ["verify", "nonsense"],
        ["verify", "lax-identity", "--trials", "0"],
        ["generate", "nothing"],
        ["generate", "lenard", "--lmax", "-1"],
        ["frobnicate"],
        ["verify", "all", "--g", "99"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("pi1: ")


def test_genus_ceiling_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PI1_MAX_G", "2")
    code, _, _ = run(capsys, "verify", "invariants", "--g", "3")
    assert code == 2
    monkeypatch.setenv("PI1_MAX_G", "x")
    code, _, _ = run(capsys, "verify", "invariants", "--g", "1")
    assert code == 2


def test_trial_seeds_are_stable_and_distinct():
    assert trial_seed(42, "casimir", 2, 0) == trial_seed(42, "casimir", 2, 0)
    seeds = {trial_seed(42, "casimir", 2, t) for t in range(50)}
    assert len(seeds) == 50


def test_jobs_give_the_same_report(capsys):
    _, serial, _ = run(capsys, "verify", "invariants", "--g", "2", "--trials", "4")
    _, parallel, _ = run(capsys, "verify", "invariants", "--g", "2", "--trials", "4", "--jobs", "2")
    assert serial == parallel


def test_console_entry_is_deterministic():
    cmd = [sys.executable, "-m", "pi1.cli", "verify", "all", "--g", "2", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
