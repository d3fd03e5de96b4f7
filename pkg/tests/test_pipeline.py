import json

import pytest
from hypothesis import given, strategies as st

from selmer_euler.cli import default_db_path
from selmer_euler.pipeline.analysis import (AnalysisConfig, EXIT_CONSISTENT, EXIT_HYPOTHESIS, EXIT_VIOLATION,
                                            PairReport, analyze_pair, local_data_from_dict, local_data_to_dict,
                                            scan)
from selmer_euler.pipeline.cache import CacheStore, cache_key
from selmer_euler.pipeline.records import (CurveDatabase, RecordError, format_record, parse_curve_text,
                                           parse_record_line)
from selmer_euler.pipeline.report import emit_report, parse_report, to_json, to_text
from selmer_euler.local import tate_algorithm
from selmer_euler.local.points import bad_primes

from conftest import DATA

BUNDLED = CurveDatabase.load(default_db_path())
FIXTURE = CurveDatabase.load(DATA / "curves.txt")


# -- records -----------------------------------------------------------------

def test_minimal_record():
    rec = parse_record_line("label=11a1 a1=0 a2=-1 a3=1 a4=-10 a6=-20")
    assert rec.ainvs == (0, -1, 1, -10, -20) and rec.optional == {}


def test_comments_and_blank_lines():
    assert parse_record_line("   # nothing here") is None
    assert parse_curve_text("\n# header\nlabel=a a1=0 a2=0 a3=0 a4=0 a6=1  # trailing\n")[0].label == "a"


@pytest.mark.parametrize("line, message", [
    ("label=x a1=0 a2=0 a3=0 a4=1", "missing field 'a6'"),
    ("label=x a1=0 a2=0 a3=0 a4=1 a6=1 colour=red", "unknown field 'colour'"),
    ("label=x a1=0 a1=0 a2=0 a3=0 a4=1 a6=1", "repeated field 'a1'"),
    ("label=x a1=0 a2=0 a3=0 a4=one a6=1", "not an integer"),
    ("label=cusp a1=0 a2=0 a3=0 a4=0 a6=0", "singular model for cusp"),
    ("label=x a1=0 a2=0 a3=0 a4=1 a6=1 rank=-1", "non-negative"),
    ("label=x a1=0 a2=0 a3=0 a4=1 a6=1 source=guess", "source must be"),
])
def test_malformed_records(line, message):
    with pytest.raises(RecordError, match=message):
        parse_curve_text("\n" + line)
    with pytest.raises(RecordError, match="line 2"):
        parse_curve_text("\n" + line)


def test_duplicate_labels_rejected():
    line = "label=a a1=0 a2=0 a3=0 a4=0 a6=1\n"
    with pytest.raises(RecordError, match="duplicate"):
        parse_curve_text(line * 2)


def test_bundled_records_match_conductor_support():
    support = {"66a1": [2, 3, 11], "462d1": [2, 3, 7, 11], "38a1": [2, 19], "114b1": [2, 3, 19]}
    for label, primes in support.items():
        E = BUNDLED[label].model()
        assert [ell for ell in bad_primes(E) if tate_algorithm(E, ell).f > 0] == primes
    with pytest.raises(KeyError):
        BUNDLED["nope"]


@given(st.tuples(*[st.integers(-99, 99)] * 5), st.integers(0, 3), st.integers(1, 9))
def test_format_parse_round_trip(a, rank, torsion):
    from selmer_euler.local.curves import SingularModel, invariants
    try:
        invariants(*a)
    except SingularModel:
        return
    text = " ".join(f"{k}={v}" for k, v in zip(("a1", "a2", "a3", "a4", "a6"), a))
    rec = parse_record_line(f"label=c {text} rank={rank} torsion_order={torsion} charpoly=5,1")
    assert parse_record_line(format_record(rec)).optional == rec.optional


# -- cache -------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    store = CacheStore(tmp_path)
    calls = []
    value = store.memo("op", lambda: calls.append(1) or {"x": 1}, "a", 2)
    assert value == {"x": 1} and store.memo("op", lambda: calls.append(1), "a", 2) == {"x": 1}
    assert len(calls) == 1
    assert cache_key("op", 1) != cache_key("op", 2)
    assert not list(tmp_path.rglob("*.tmp"))


def test_local_data_serialisation_round_trip():
    d = tate_algorithm(BUNDLED["462d1"].model(), 7)
    assert local_data_from_dict(json.loads(json.dumps(local_data_to_dict(d)))) == d


# -- analysis ----------------------------------------------------------------

def test_66a1_462d1_over_q():
    r = analyze_pair(BUNDLED, "66a1", "462d1", 5)
    assert r.exit_code == EXIT_CONSISTENT
    assert [c["phi"]["exponent"] for c in r.curves] == [0, 0]
    assert [c["chi"]["exponent"] for c in r.curves] == [0, 0]


def test_38a1_114b1_over_qi():
    r = analyze_pair(BUNDLED, "38a1", "114b1", 5, "Qi")
    assert r.exit_code == EXIT_CONSISTENT
    assert r.curves[0]["phi"]["exponent"] >= 1
    assert r.verdicts["euler_characteristic_congruence"]["clause"] == "smaller rank side divisible by p"


def test_not_congruent_exits_early():
    r = analyze_pair(BUNDLED, "11a1", "37a1", 7)
    assert r.exit_code == EXIT_HYPOTHESIS and r.curves == []
    assert r.verdicts["congruence"] == "NOT p-CONGRUENT"


def test_violation_from_user_supplied_sha():
    text = (DATA / "curves.txt").read_text().replace(
        "label=462d1 a1=1 a2=0 a3=1 a4=-1676 a6=5058506  rank=0 sha_p_order=1",
        "label=462d1 a1=1 a2=0 a3=1 a4=-1676 a6=5058506  rank=0 sha_p_order=25 source=user")
    db = CurveDatabase(parse_curve_text(text))
    r = analyze_pair(db, "66a1", "462d1", 5)
    assert r.verdicts["euler_characteristic_congruence"]["verdict"] == "VIOLATION"
    assert r.exit_code == EXIT_VIOLATION
    assert r.curves[1]["provenance"]["sha_p_order"] == "user"


def test_missing_rank_is_undetermined():
    db = CurveDatabase(parse_curve_text(
        "label=66a1 a1=1 a2=0 a3=1 a4=-6 a6=4\nlabel=462d1 a1=1 a2=0 a3=1 a4=-1676 a6=5058506\n"))
    r = analyze_pair(db, "66a1", "462d1", 5)
    assert r.verdicts["euler_characteristic_congruence"]["verdict"] == "UNDETERMINED"
    assert r.exit_code == EXIT_HYPOTHESIS


def test_bad_primes_rejected():
    for p in (2, 3, 9):
        with pytest.raises(ValueError):
            analyze_pair(BUNDLED, "66a1", "462d1", p)


def test_reports_are_deterministic_and_cache_neutral(tmp_path):
    cold = to_json(analyze_pair(BUNDLED, "66a1", "462d1", 5, config=AnalysisConfig(cache=CacheStore(tmp_path))))
    warm = to_json(analyze_pair(BUNDLED, "66a1", "462d1", 5, config=AnalysisConfig(cache=CacheStore(tmp_path))))
    plain = to_json(analyze_pair(BUNDLED, "66a1", "462d1", 5))
    assert cold == warm == plain


def test_report_round_trip_and_text():
    r = analyze_pair(BUNDLED, "66a1", "462d1", 5)
    again = parse_report(to_json(r))
    assert isinstance(again, PairReport) and to_json(again) == to_json(r)
    text = to_text(r)
    assert "Nv*L_v(E,1)^-1" in text and "exit code 0" in text
    assert emit_report(r, "json") == to_json(r)
    rows = [c["local_table"] for c in r.curves]
    assert [row["scaled_value"] for row in rows[0]] == ["3", "2", "6", "12"]
    assert [row["scaled_value"] for row in rows[1]] == ["3", "2", "8", "12"]


# -- scan --------------------------------------------------------------------

def test_scan_finds_both_fixture_pairs():
    q = {c.labels for c in scan(FIXTURE, 5, 200)}
    qi = {c.labels for c in scan(FIXTURE, 5, 200, "Qi")}
    assert ("66a1", "462d1") in q
    assert ("38a1", "114b1") in q | qi


def test_scan_rejects_even_p_and_handles_tiny_databases():
    with pytest.raises(ValueError):
        scan(FIXTURE, 2)
    assert scan(CurveDatabase(FIXTURE.records[:1]), 5) == []


def test_scan_results_shrink_as_the_bound_grows():
    small = {c.labels for c in scan(FIXTURE, 5, 60)}
    large = {c.labels for c in scan(FIXTURE, 5, 400)}
    assert large <= small
