"""Financial and accuracy metrics for one simulated run.

Financial metrics come straight from the transaction log: how much of honest
consumers' spend leaked to scam suppliers (loss), and how that leak compares
with what the scammers spent pumping themselves (profit). Accuracy metrics
compare computed ranks against the expected goodness labels, period by
period. Metrics whose denominator is empty are reported as None and
serialized as the literal token "undefined"; they are never faked as 0 or -1.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .engine import ReputationState


@dataclass(frozen=True)
class MetricsReport:
    loss_to_scam: float | None
    profit_from_scam: float | None
    pearson_avg: float | None
    pearson_latest: float | None
    acc_good: float | None
    acc_bad: float | None
    acc_mean: float | None
    rmsd_good: float | None
    rmsd_bad: float | None
    rmsd_mean: float | None
    volume_good: float
    volume_bad: float
    volume_good_to_bad: float
    volume_ratio: float | None


def financial_metrics(log) -> tuple[float | None, float | None, float, float, float]:
    """(loss_to_scam, profit_from_scam, V_g, V_b, V_gb) from a transaction log.

    V_g is everything good consumers spent, V_b everything bad consumers
    spent, V_gb the slice of V_g that went to bad suppliers.
    """
    v_g = v_b = v_gb = 0.0
    for entry in log.entries:
        if entry.rater_good:
            v_g += entry.record.value
            if not entry.ratee_good:
                v_gb += entry.record.value
        else:
            v_b += entry.record.value
    loss = v_gb / v_g if v_g > 0 else None
    profit = v_gb / v_b if v_b > 0 else None
    return loss, profit, v_g, v_b, v_gb


def accuracy_metrics(
    computed: dict[str, float], expected: dict[str, float]
) -> tuple[float | None, float | None, float | None]:
    """Goodness-weighted and badness-weighted mean computed rank.

    A_g averages computed ranks over the expected-good agents, A_b averages
    the complement over the expected-bad ones. Either is None when its class
    is empty.
    """
    if computed.keys() != expected.keys():
        raise ValueError("computed and expected must cover the same agents")
    agents = sorted(expected)
    w_good = math.fsum(expected[a] for a in agents)
    w_bad = math.fsum(1.0 - expected[a] for a in agents)
    a_g = (
        math.fsum(computed[a] * expected[a] for a in agents) / w_good
        if w_good > 0
        else None
    )
    a_b = (
        math.fsum((1.0 - computed[a]) * (1.0 - expected[a]) for a in agents) / w_bad
        if w_bad > 0
        else None
    )
    a_m = (a_g + a_b) / 2.0 if a_g is not None and a_b is not None else None
    return a_g, a_b, a_m


def rmsd_metrics(
    computed: dict[str, float], expected: dict[str, float]
) -> tuple[float | None, float | None, float | None]:
    """Root-mean-square deviation, weighted by goodness, badness, and flat."""
    if computed.keys() != expected.keys():
        raise ValueError("computed and expected must cover the same agents")
    agents = sorted(expected)
    w_good = math.fsum(expected[a] for a in agents)
    w_bad = math.fsum(1.0 - expected[a] for a in agents)
    sq = {a: (computed[a] - expected[a]) ** 2 for a in agents}
    d_g = (
        math.sqrt(math.fsum(sq[a] * expected[a] for a in agents) / w_good)
        if w_good > 0
        else None
    )
    d_b = (
        math.sqrt(math.fsum(sq[a] * (1.0 - expected[a]) for a in agents) / w_bad)
        if w_bad > 0
        else None
    )
    d_m = math.sqrt(math.fsum(sq[a] for a in agents) / len(agents)) if agents else None
    return d_g, d_b, d_m


def pearson(computed: dict[str, float], expected: dict[str, float]) -> float | None:
    """Sample Pearson correlation, None when either series is degenerate."""
    if computed.keys() != expected.keys():
        raise ValueError("computed and expected must cover the same agents")
    agents = sorted(expected)
    if len(agents) < 2:
        return None
    try:
        return statistics.correlation(
            [computed[a] for a in agents], [expected[a] for a in agents]
        )
    except statistics.StatisticsError:
        return None


def _mean_defined(values: list[float | None]) -> float | None:
    defined = [v for v in values if v is not None]
    return statistics.fmean(defined) if defined else None


def build_report(
    log,
    states: list[ReputationState],
    expected: dict[str, float],
    default_rank: float = 0.5,
) -> MetricsReport:
    """Assemble the full report for one run.

    Accuracy, RMSD and Pearson are computed per period and averaged over the
    periods where they are defined; pearson_latest uses the final state only.
    Agents missing from a state are scored at default_rank for that period,
    the same rank the engine would hand a newcomer.
    """
    if not states:
        raise ValueError("at least one reputation state is required")
    loss, profit, v_g, v_b, v_gb = financial_metrics(log)

    per_period: dict[str, list[float | None]] = {
        k: [] for k in ("a_g", "a_b", "d_g", "d_b", "d_m", "pcc")
    }
    for state in states:
        computed = {a: state.ranks.get(a, default_rank) for a in expected}
        a_g, a_b, _ = accuracy_metrics(computed, expected)
        d_g, d_b, d_m = rmsd_metrics(computed, expected)
        per_period["a_g"].append(a_g)
        per_period["a_b"].append(a_b)
        per_period["d_g"].append(d_g)
        per_period["d_b"].append(d_b)
        per_period["d_m"].append(d_m)
        per_period["pcc"].append(pearson(computed, expected))

    final = {a: states[-1].ranks.get(a, default_rank) for a in expected}
    acc_good = _mean_defined(per_period["a_g"])
    acc_bad = _mean_defined(per_period["a_b"])
    # the mean-accuracy identity must hold exactly on the report
    acc_mean = (
        (acc_good + acc_bad) / 2.0
        if acc_good is not None and acc_bad is not None
        else None
    )
    return MetricsReport(
        loss_to_scam=loss,
        profit_from_scam=profit,
        pearson_avg=_mean_defined(per_period["pcc"]),
        pearson_latest=pearson(final, expected),
        acc_good=acc_good,
        acc_bad=acc_bad,
        acc_mean=acc_mean,
        rmsd_good=_mean_defined(per_period["d_g"]),
        rmsd_bad=_mean_defined(per_period["d_b"]),
        rmsd_mean=_mean_defined(per_period["d_m"]),
        volume_good=v_g,
        volume_bad=v_b,
        volume_good_to_bad=v_gb,
        volume_ratio=v_g / v_b if v_b > 0 else None,
    )
