import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liquidrank.engine import RatingRecord, ReputationState
from liquidrank.market import LogEntry, TransactionLog
from liquidrank.metrics import (
    accuracy_metrics,
    build_report,
    financial_metrics,
    pearson,
    rmsd_metrics,
)

TOL = 1e-12


def entry(rater_good, ratee_good, value, day=1):
    record = RatingRecord(day=day, rater="r", ratee="e", rating=0.5, value=value)
    return LogEntry(record=record, rater_good=rater_good, ratee_good=ratee_good)


# ------------------------------------------------------------------ financial

def test_financial_direct_ratio():
    log = TransactionLog(entries=[entry(True, True, 99.0), entry(True, False, 1.0), entry(False, False, 5.0)])
    loss, profit, v_g, v_b, v_gb = financial_metrics(log)
    assert loss == pytest.approx(0.01, abs=TOL)
    assert profit == pytest.approx(0.2, abs=TOL)
    assert (v_g, v_b, v_gb) == (100.0, 5.0, 1.0)


def test_financial_no_scam_is_zero_not_undefined():
    log = TransactionLog(entries=[entry(True, True, 10.0), entry(False, False, 2.0)])
    loss, profit, *_ = financial_metrics(log)
    assert loss == 0.0
    assert profit == 0.0


def test_financial_zero_denominators_undefined():
    log = TransactionLog(entries=[entry(True, True, 10.0)])
    loss, profit, _, v_b, _ = financial_metrics(log)
    assert v_b == 0.0
    assert loss == 0.0
    assert profit is None

    empty = TransactionLog(entries=[])
    loss, profit, *_ = financial_metrics(empty)
    assert loss is None and profit is None


# ------------------------------------------------------------------- accuracy

def test_accuracy_perfect():
    computed = {"g": 1.0, "b": 0.0}
    expected = {"g": 1.0, "b": 0.0}
    assert accuracy_metrics(computed, expected) == (1.0, 1.0, 1.0)


def test_accuracy_constant_half():
    computed = {"g": 0.5, "b": 0.5}
    expected = {"g": 1.0, "b": 0.0}
    assert accuracy_metrics(computed, expected) == (0.5, 0.5, 0.5)


def test_accuracy_worked_example():
    computed = {"g1": 1.0, "g2": 0.5, "b1": 0.0}
    expected = {"g1": 1.0, "g2": 1.0, "b1": 0.0}
    a_g, a_b, a_m = accuracy_metrics(computed, expected)
    assert a_g == 0.75
    assert a_b == 1.0
    assert a_m == 0.875


def test_accuracy_single_class_undefined():
    a_g, a_b, a_m = accuracy_metrics({"g": 0.9}, {"g": 1.0})
    assert a_g == 0.9
    assert a_b is None
    assert a_m is None


def test_accuracy_key_mismatch_rejected():
    with pytest.raises(ValueError):
        accuracy_metrics({"a": 1.0}, {"b": 1.0})


# ----------------------------------------------------------------------- rmsd

def test_rmsd_perfect():
    assert rmsd_metrics({"g": 1.0, "b": 0.0}, {"g": 1.0, "b": 0.0}) == (0.0, 0.0, 0.0)


def test_rmsd_constant_half():
    d_g, d_b, d_m = rmsd_metrics({"g": 0.5, "b": 0.5}, {"g": 1.0, "b": 0.0})
    assert d_g == pytest.approx(0.5, abs=TOL)
    assert d_b == pytest.approx(0.5, abs=TOL)
    assert d_m == pytest.approx(0.5, abs=TOL)


def test_rmsd_worked_example():
    d_g, d_b, d_m = rmsd_metrics({"g": 0.8, "b": 0.4}, {"g": 1.0, "b": 0.0})
    assert d_g == pytest.approx(0.2, abs=TOL)
    assert d_b == pytest.approx(0.4, abs=TOL)
    assert d_m == pytest.approx(math.sqrt(0.1), abs=TOL)


# -------------------------------------------------------------------- pearson

def test_pearson_identity_and_inverse():
    expected = {"a": 1.0, "b": 1.0, "c": 0.0}
    assert pearson(expected, expected) == pytest.approx(1.0, abs=TOL)
    inverted = {k: 1.0 - v for k, v in expected.items()}
    assert pearson(inverted, expected) == pytest.approx(-1.0, abs=TOL)


def test_pearson_worked_example():
    computed = {"a": 0.9, "b": 0.8, "c": 0.1, "d": 0.2}
    expected = {"a": 1.0, "b": 1.0, "c": 0.0, "d": 0.0}
    assert pearson(computed, expected) == pytest.approx(0.9899, abs=1e-4)


def test_pearson_zero_variance_undefined():
    assert pearson({"a": 0.5, "b": 0.5}, {"a": 1.0, "b": 0.0}) is None
    assert pearson({"a": 1.0}, {"a": 1.0}) is None


# --------------------------------------------------------------- build_report

def synthetic_log():
    return TransactionLog(
        entries=[entry(True, True, 80.0), entry(True, False, 20.0), entry(False, False, 10.0)]
    )


def test_report_single_perfect_period():
    expected = {"g": 1.0, "b": 0.0}
    states = [ReputationState(day=1, ranks={"g": 1.0, "b": 0.0})]
    report = build_report(synthetic_log(), states, expected)
    assert report.pearson_avg == pytest.approx(1.0, abs=TOL)
    assert report.pearson_latest == pytest.approx(1.0, abs=TOL)
    assert report.acc_good == 1.0
    assert report.rmsd_mean == 0.0


def test_report_pearson_avg_over_periods():
    expected = {"g1": 1.0, "g2": 1.0, "b1": 0.0, "b2": 0.0}
    noisy = {"g1": 0.9, "g2": 0.8, "b1": 0.1, "b2": 0.2}
    exact = {"g1": 1.0, "g2": 1.0, "b1": 0.0, "b2": 0.0}
    states = [
        ReputationState(day=1, ranks=noisy),
        ReputationState(day=2, ranks=exact),
    ]
    report = build_report(synthetic_log(), states, expected)
    p1 = pearson(noisy, expected)
    assert report.pearson_avg == pytest.approx((p1 + 1.0) / 2, abs=TOL)
    assert report.pearson_latest == pytest.approx(1.0, abs=TOL)


def test_report_absent_agent_scored_at_default_rank():
    expected = {"g": 1.0, "b": 0.0}
    states = [ReputationState(day=1, ranks={"g": 1.0})]
    report = build_report(synthetic_log(), states, expected, default_rank=0.5)
    # absent bad supplier counts as 0.5, so acc_bad = 1 - 0.5
    assert report.acc_bad == 0.5


def test_report_identities_exact():
    expected = {"g": 1.0, "b": 0.0}
    states = [ReputationState(day=1, ranks={"g": 0.73, "b": 0.21})]
    report = build_report(synthetic_log(), states, expected)
    assert report.acc_mean == (report.acc_good + report.acc_bad) / 2
    assert report.loss_to_scam == report.volume_good_to_bad / report.volume_good
    assert report.profit_from_scam == report.volume_good_to_bad / report.volume_bad
    assert report.volume_ratio == report.volume_good / report.volume_bad


def test_report_requires_states():
    with pytest.raises(ValueError, match="state"):
        build_report(synthetic_log(), [], {"g": 1.0, "b": 0.0})


# ----------------------------------------------------------------- properties

agent_maps = st.dictionaries(
    st.sampled_from(["a", "b", "c", "d", "e", "f"]),
    st.floats(0.0, 1.0, allow_nan=False),
    min_size=2,
    max_size=6,
)


@st.composite
def labelled_maps(draw):
    computed = draw(agent_maps)
    expected = {k: float(draw(st.booleans())) for k in computed}
    return computed, expected


@settings(deadline=None)
@given(labelled_maps())
def test_prop_accuracy_mean_identity(maps):
    computed, expected = maps
    a_g, a_b, a_m = accuracy_metrics(computed, expected)
    if a_g is not None and a_b is not None:
        assert a_m == (a_g + a_b) / 2
    else:
        assert a_m is None


@settings(deadline=None)
@given(labelled_maps())
def test_prop_complement_symmetry(maps):
    computed, expected = maps
    a = accuracy_metrics(computed, expected)
    d = rmsd_metrics(computed, expected)
    comp = {k: 1.0 - v for k, v in computed.items()}
    exp = {k: 1.0 - v for k, v in expected.items()}
    a_sw = accuracy_metrics(comp, exp)
    d_sw = rmsd_metrics(comp, exp)

    def close(x, y):
        if x is None or y is None:
            return x is None and y is None
        return math.isclose(x, y, abs_tol=TOL)

    assert close(a[0], a_sw[1]) and close(a[1], a_sw[0]) and close(a[2], a_sw[2])
    assert close(d[0], d_sw[1]) and close(d[1], d_sw[0])
    assert close(d[2], d_sw[2])


@settings(deadline=None)
@given(labelled_maps())
def test_prop_good_accuracy_error_complement(maps):
    computed, expected = maps
    good = [computed[k] for k in computed if expected[k] == 1.0]
    if not good:
        return
    a_g, _, _ = accuracy_metrics(computed, expected)
    d_g, _, _ = rmsd_metrics(computed, expected)
    mean_err = sum(1.0 - v for v in good) / len(good)
    mean_sq = sum((1.0 - v) ** 2 for v in good) / len(good)
    assert a_g == pytest.approx(1.0 - mean_err, abs=TOL)
    assert d_g**2 == pytest.approx(mean_sq, abs=TOL)


@settings(deadline=None)
@given(
    labelled_maps(),
    st.floats(0.01, 100.0, allow_nan=False),
    st.floats(-10.0, 10.0, allow_nan=False),
)
def test_prop_pearson_affine_invariant(maps, a, b):
    computed, expected = maps
    base = pearson(computed, expected)
    scaled = pearson({k: a * v + b for k, v in computed.items()}, expected)
    if base is None:
        assert scaled is None
    else:
        assert scaled == pytest.approx(base, abs=1e-9)


@settings(deadline=None)
@given(st.permutations(list(range(6))))
def test_prop_financial_order_independent(order):
    entries = [
        entry(True, True, 50.0),
        entry(True, False, 3.0),
        entry(True, True, 25.0),
        entry(False, False, 4.0),
        entry(False, False, 1.0),
        entry(True, False, 2.0),
    ]
    base = financial_metrics(TransactionLog(entries=entries))
    shuffled = financial_metrics(TransactionLog(entries=[entries[i] for i in order]))
    for x, y in zip(base, shuffled):
        assert x == pytest.approx(y, abs=TOL)
