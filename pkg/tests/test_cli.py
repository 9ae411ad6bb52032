"""Command line: exit codes, reports and determinism."""

import json

import pytest

from homred.cli import main, parse_params


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    assert "rh4-family" in out.split()


def test_check_passes(capsys):
    code, out, _ = run(capsys, "check", "rh4-family", "λ₀=2", "λ₁=3", "--points", "4")
    assert code == 0
    assert "λ₀=2 λ₁=3" in out


def test_check_tight_tolerance_fails(capsys):
    code, _, _ = run(capsys, "check", "hopf-s3-u2", "λ=0", "--points", "4", "--tol", "1e-15")
    assert code == 1


def test_json_report_schema(capsys):
    code, out, _ = run(capsys, "check", "hopf-s3-u2", "λ=0", "--points", "3", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "homred.report/1"
    assert doc["example"]["parameters"] == {"lambda": 0.0}
    assert doc["passed"] is True
    assert doc["summary"]["failed"] == 0
    assert "timing" not in doc


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "check", "round-s2", "--points", "2", "--json", "--timing")
    assert "wall_seconds" in json.loads(out)["timing"]


def test_json_is_deterministic(capsys):
    args = ("check", "sasakian-s3", "λ=0.5", "--points", "3", "--seed", "42", "--json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "rhn-solvable", "n=3", "--points", "3", "--json")
    assert code == 0
    assert json.loads(out)["results"]["class"] == "S1"


def test_reduce_prints_table(capsys):
    code, out, _ = run(capsys, "reduce", "hopf-s7-sp2u1", "λ=0", "--at", "t=0")
    assert code == 0
    assert "+1 d3 ⊗ d1 ∧ d5" in out
    assert out.count("⊗") == 8


@pytest.mark.parametrize(
    "argv",
    [
        ("check", "no-such"),
        ("check", "rh4-family", "mu=1"),
        ("check", "rh4-family", "lambda0"),
        ("check", "rh4-family", "--bogus"),
        ("reduce", "hopf-s3-u2", "--at", "1,2,3,4,5"),
        (),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "homred.ini"
    cfg.write_text("[homred]\npoints = 2\nseed = 7\ntol = 1e-6\n")
    _, out, _ = run(capsys, "check", "round-s2", "--config", str(cfg), "--json")
    assert json.loads(out)["settings"] == {"points": 2, "seed": 7, "tol": 1e-6}
    _, out, _ = run(capsys, "check", "round-s2", "--config", str(cfg), "--points", "3", "--json")
    assert json.loads(out)["settings"]["points"] == 3


def test_report_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("HOMRED_REPORT_DIR", str(tmp_path))
    run(capsys, "check", "round-s2", "--points", "2")
    doc = json.loads((tmp_path / "check-round-s2.json").read_text())
    assert doc["command"] == "check"


def test_verify_all_subset(capsys):
    code, out, _ = run(capsys, "verify-all", "--criteria", "1,3", "--points", "3", "--json")
    doc = json.loads(out)
    assert code == 0
    assert {c["criterion"] for c in doc["checks"]} == {1, 3}


def test_parameter_aliases():
    assert parse_params(["λ=1", "λ₀=2", "λ1=3", "n=4"]) == {"lambda": 1.0, "lambda0": 2.0, "lambda1": 3.0, "n": 4.0}
