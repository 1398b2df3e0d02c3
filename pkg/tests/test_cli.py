"""Command-line behavior: exit codes, output formats, determinism."""

import json

import pytest

from opineq.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compare_prints_ratio(capsys):
    code, out, _ = run_cli(capsys, "compare", "--a", "thm3.4", "--b", "seo",
                           "--m", "1", "--M", "4", "--nu", "0.5")
    assert code == 0
    assert out.strip() == "0.8"


def test_compare_incompatible_pair_exits_2(capsys):
    code, _, err = run_cli(capsys, "compare", "--a", "lee", "--b", "thm2.7",
                           "--m", "1", "--mp", "1.5", "--Mp", "2", "--M", "4")
    assert code == 2
    assert "error:" in err


def test_verify_unknown_id_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--ineq", "nosuch")
    assert code == 2
    assert "nosuch" in err


def test_verify_passing_run(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run_cli(capsys, "verify", "--ineq", "amgm,lin", "--n", "2",
                         "--trials", "3", "--seed", "5", "--out", str(out_path))
    assert code == 0
    report = json.loads(out_path.read_text())
    assert set(report) == {"config_hash", "cases", "summary"}
    assert len(report["cases"]) == 2 * 3


def test_verify_refuted_inequality_exits_1(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run_cli(capsys, "verify", "--ineq", "thm3.4", "--n", "2",
                         "--trials", "4", "--nu", "0.5", "--m1", "1",
                         "--M1", "1.01", "--m2", "2", "--M2", "2.02",
                         "--out", str(out_path))
    assert code == 1
    report = json.loads(out_path.read_text())
    failures = sum(1 for c in report["cases"] if not c["holds"])
    assert failures == 4
    assert all("replay" in c for c in report["cases"] if not c["holds"])


def test_verify_informational_failures_exit_0(capsys):
    # lee-printed fails often but is not an asserted entry
    code, out, _ = run_cli(capsys, "verify", "--ineq", "lee-printed", "--n", "2",
                           "--trials", "6", "--seed", "3")
    assert code == 0
    report = json.loads(out)
    assert any(not c["holds"] for c in report["cases"])


def test_verify_csv_format(capsys):
    code, out, _ = run_cli(capsys, "verify", "--ineq", "amgm", "--n", "2",
                           "--trials", "2", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "id,seed,n,params,gap,relative_gap,holds"
    assert len(lines) == 3


def test_verify_bad_bounds_combination_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--ineq", "amgm", "--m", "1")
    assert code == 2
    code, _, err = run_cli(capsys, "verify", "--ineq", "amgm",
                           "--m", "1", "--M", "4", "--m1", "1", "--M1", "2",
                           "--m2", "1", "--M2", "2")
    assert code == 2


def test_gen_deterministic(capsys):
    code, first, _ = run_cli(capsys, "gen", "--n", "2", "--seed", "3",
                             "--m", "1", "--M", "4")
    assert code == 0
    code, second, _ = run_cli(capsys, "gen", "--n", "2", "--seed", "3",
                              "--m", "1", "--M", "4")
    assert first == second
    obj = json.loads(first)
    assert obj["n"] == 2
    assert obj["bounds"] == {"kind": "common", "m": 1.0, "M": 4.0}
    assert "A" in obj and "B" in obj
    code, third, _ = run_cli(capsys, "gen", "--n", "2", "--seed", "4",
                             "--m", "1", "--M", "4")
    assert third != first


def test_search_cli(capsys):
    code, out, _ = run_cli(capsys, "search", "--ineq", "scalar-lemma",
                           "--budget", "100", "--nu", "0.25")
    assert code == 0
    rec = json.loads(out)
    assert abs(rec["best_gap"]) <= 1e-12


def test_help_lists_registry_ids(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for ineq_id in ("amgm", "thm2.4-phi-inside", "thm3.4", "lee-printed"):
        assert ineq_id in out


def test_selftest_tiny_run(capsys, tmp_path):
    out_path = tmp_path / "self.json"
    code, _, _ = run_cli(capsys, "selftest", "--trials", "1", "--n", "2",
                         "--out", str(out_path))
    # thm3.4 and the printed informational variants may fail even at one
    # trial; the exit code reflects asserted entries only
    report = json.loads(out_path.read_text())
    assert len(report["cases"]) == 44
    asserted_bad = [s for s in report["summary"] if s["failures"]]
    bad_ids = {s["id"] for s in asserted_bad}
    assert bad_ids <= {"thm3.4", "lee-printed", "thm3.3", "lh-p2-demo",
                       "thm2.9-proof-phi-inside", "thm2.9-proof-phi-outside"}
    assert code == (1 if "thm3.4" in bad_ids else 0)
