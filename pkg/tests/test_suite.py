"""Suite runner: determinism, parallel invariance, mutation, search."""

import json

import pytest

from opineq.constants import SandwichBounds
from opineq.errors import ConfigInvalid, UnknownInequality
from opineq.suite import Report, SuiteConfig, run_suite, tightness_search


def small_config(**kw):
    defaults = dict(ids=("amgm", "lin", "thm2.4-phi-inside", "seo"),
                    dims=(2, 3), trials=4, seed=9)
    defaults.update(kw)
    return SuiteConfig(**defaults)


def test_empty_run():
    rep = run_suite(small_config(trials=0))
    assert rep.cases == ()
    assert all(s["trials"] == 0 and s["failures"] == 0 for s in rep.summary)
    assert all(s["worst_relative_gap"] is None for s in rep.summary)
    assert rep.asserted_failures == 0


def test_reruns_are_byte_identical():
    cfg = small_config()
    a = run_suite(cfg)
    b = run_suite(cfg)
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()


def test_workers_do_not_change_output():
    r1 = run_suite(small_config(workers=1))
    r3 = run_suite(small_config(workers=3))
    assert r1.config_hash == r3.config_hash
    assert r1.to_json() == r3.to_json()


def test_config_hash_tracks_content_not_workers():
    base = small_config()
    assert base.config_hash() == small_config(workers=5).config_hash()
    assert base.config_hash() != small_config(seed=10).config_hash()
    assert base.config_hash() != small_config(trials=5).config_hash()
    assert base.config_hash() != small_config(mutate={"lin": 0.9}).config_hash()


def test_report_schema():
    rep = run_suite(small_config(trials=2))
    obj = json.loads(rep.to_json())
    assert set(obj) == {"config_hash", "cases", "summary"}
    assert len(obj["cases"]) == 4 * 2 * 2
    for row in obj["cases"]:
        assert set(row) >= {"id", "seed", "n", "params", "gap", "relative_gap", "holds"}
        assert set(row["params"]) == {"nu", "p", "alpha", "map", "bounds"}
    for s in obj["summary"]:
        assert set(s) == {"id", "trials", "failures", "worst_relative_gap"}
    csv_text = rep.to_csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "id,seed,n,params,gap,relative_gap,holds"
    assert len(lines) == 1 + len(obj["cases"])


def test_failing_cases_carry_replay_payload():
    cfg = small_config(ids=("lin",), dims=(2,), trials=3,
                      fixed_bounds=SandwichBounds.common(1.0, 2.0),
                      force_endpoints=True, mutate={"lin": 0.7})
    rep = run_suite(cfg)
    failing = [row for row in rep.cases if not row["holds"]]
    assert failing
    for row in failing:
        assert "replay" in row
        assert row["replay"]["instance"]["n"] == 2
        assert row["replay"]["map"] is not None
    passing_cfg = small_config(ids=("lin",), dims=(2,), trials=3,
                               fixed_bounds=SandwichBounds.common(1.0, 2.0),
                               force_endpoints=True)
    for row in run_suite(passing_cfg).cases:
        assert "replay" not in row


def test_mutation_only_touches_target_id():
    cfg = small_config(mutate={"lin": 0.6})
    rep = run_suite(cfg)
    by_id = {s["id"]: s for s in rep.summary}
    assert by_id["lin"]["failures"] > 0
    assert by_id["amgm"]["failures"] == 0
    assert by_id["thm2.4-phi-inside"]["failures"] == 0


def test_config_validation_errors():
    with pytest.raises(ConfigInvalid):
        run_suite(small_config(trials=-1))
    with pytest.raises(ConfigInvalid):
        run_suite(small_config(workers=0))
    with pytest.raises(ConfigInvalid):
        run_suite(small_config(dims=()))
    with pytest.raises(UnknownInequality):
        run_suite(small_config(ids=("nosuch",)))
    with pytest.raises(ConfigInvalid):
        run_suite(small_config(mutate={"lin": -1.0}))
    with pytest.raises(ConfigInvalid):
        # seo needs reverse-Ando bounds; common fixed bounds cannot serve it
        run_suite(small_config(fixed_bounds=SandwichBounds.common(1.0, 2.0)))


def test_fixed_bounds_flow_through():
    cfg = small_config(ids=("lin",), dims=(2,), trials=2,
                      fixed_bounds=SandwichBounds.common(1.0, 3.0))
    rep = run_suite(cfg)
    for row in rep.cases:
        assert row["params"]["bounds"] == {"kind": "common", "m": 1.0, "M": 3.0}


def test_search_amgm_reaches_equality():
    rec = tightness_search("amgm", budget=1000, seed=0)
    assert rec.evaluations == 1000
    assert rec.best_gap < 1e-6
    assert rec.holds


def test_search_scalar_lemma_special_weight():
    rec = tightness_search("scalar-lemma", budget=300, seed=0, nu=0.25)
    assert abs(rec.best_gap) <= 1e-12
    assert rec.params["nu"] == 0.25


def test_search_scalar_lemma_free_weight():
    rec = tightness_search("scalar-lemma", budget=300, seed=1)
    assert rec.best_gap >= -1e-12
    assert rec.best_gap <= 1e-6


def test_search_sound_statement_stays_nonnegative():
    rec = tightness_search("thm2.4-phi-inside", budget=300, seed=1)
    assert rec.holds
    assert rec.best_relative_gap >= -1e-9


def test_search_finds_confirmed_violation_on_refuted_entry():
    rec = tightness_search("thm3.4", budget=300, seed=0)
    assert not rec.holds
    assert rec.best_relative_gap < -1e-3
    assert rec.confirmed is True


def test_search_rejects_bad_budget():
    with pytest.raises(ConfigInvalid):
        tightness_search("amgm", budget=0, seed=0)
    with pytest.raises(UnknownInequality):
        tightness_search("nosuch", budget=10, seed=0)
