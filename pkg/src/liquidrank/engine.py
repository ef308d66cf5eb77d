"""Incremental weighted liquid rank computation.

A reputation state is a map from agent id to a rank in [0, 1], stamped with
the day it was computed. Each observation period, the ratings collected in
that period are condensed into a differential update which is normalized,
blended with the previous state under a conservatism factor, and re-normalized
so the best-regarded agent sits at 1.0.

The update pipeline, in order:

    1. optional per-pair aggregation (mean rating, summed value)
    2. precision rescale of financial values, Round(value / P)
    3. optional log scaling of financial values
    4. optional downrating remap of explicit ratings (punitive below 0.25)
    5. differential accrual per rated agent, weighted by the rater's own
       previous rank when liquidity is on
    6. normalization of the differential (max division or min-max)
    7. conservatism blend with the previous state
    8. final max normalization

Every function here is pure; identical inputs produce bit-identical outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

IMPLICIT = "implicit-financial"
UNWEIGHTED = "explicit-unweighted"
WEIGHTED = "explicit-weighted"
RATING_MODES = (IMPLICIT, UNWEIGHTED, WEIGHTED)


@dataclass(frozen=True)
class EngineParams:
    """All knobs of the rank update.

    default_rank is assigned to agents never seen before, decayed_rank is
    what an inactive agent's rank drifts toward, and conservatism sets the
    blend weight of the previous state against the fresh differential.
    """

    default_rank: float = 0.5
    decayed_rank: float = 0.0
    default_rating: float = 0.5
    conservatism: float = 0.5
    precision: float = 0.01
    weighting: bool = True
    full_norm: bool = True
    liquid: bool = True
    log_ranks: bool = True
    log_ratings: bool = False
    aggregation: bool = False
    downrating: bool = False
    update_period: int = 1

    def validate(self) -> None:
        for name in ("default_rank", "decayed_rank", "default_rating", "conservatism"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.precision <= 0:
            raise ValueError(f"precision must be positive, got {self.precision}")
        if self.update_period < 1:
            raise ValueError(f"update_period must be >= 1, got {self.update_period}")


@dataclass(frozen=True)
class RatingRecord:
    """One rating event: rater scored ratee on some day, with the financial
    value of the underlying transaction. rating is None for purely implicit
    (financial) signals."""

    day: int
    rater: str
    ratee: str
    rating: float | None
    value: float

    def validate(self) -> None:
        if self.rater == self.ratee:
            raise ValueError(f"self-rating rejected for agent {self.rater!r}")
        if self.rating is not None and not 0.0 <= self.rating <= 1.0:
            raise ValueError(f"rating must be in [0, 1], got {self.rating}")
        if self.value < 0:
            raise ValueError(f"value must be non-negative, got {self.value}")


@dataclass(frozen=True)
class ReputationState:
    day: int
    ranks: dict[str, float]


@dataclass(frozen=True)
class DifferentialUpdate:
    day: int
    raw: dict[str, float]
    normalized: dict[str, float]


@dataclass(frozen=True)
class UpdateTrace:
    """Intermediates of one period update, for inspection and verification."""

    differential: DifferentialUpdate
    blended: dict[str, float]
    state: ReputationState


def aggregate_ratings(records: list[RatingRecord]) -> list[RatingRecord]:
    """Collapse repeat (rater, ratee) pairs into one record per pair.

    The pair's ratings are averaged arithmetically and its values summed,
    so frequent small interactions cannot out-shout one large one. Pairs keep
    first-occurrence order. Records without an explicit rating aggregate to a
    rating-free record.
    """
    groups: dict[tuple[str, str], list[RatingRecord]] = {}
    for rec in records:
        groups.setdefault((rec.rater, rec.ratee), []).append(rec)
    out = []
    for group in groups.values():
        if len(group) == 1:
            out.append(group[0])
            continue
        ratings = [r.rating for r in group if r.rating is not None]
        rating = math.fsum(ratings) / len(ratings) if ratings else None
        value = math.fsum(r.value for r in group)
        out.append(replace(group[0], rating=rating, value=value))
    return out


def apply_precision(value: float, precision: float) -> float:
    """Round(value / precision), half away from zero."""
    scaled = value / precision
    if scaled >= 0:
        return float(math.floor(scaled + 0.5))
    return float(math.ceil(scaled - 0.5))


def apply_log_rating(q: float) -> float:
    """Signed log scale: -log10(1 - q) below zero, log10(1 + q) above.

    Odd-symmetric, so withdrawals and cancellations (negative values) mirror
    deposits of the same magnitude.
    """
    if q < 0:
        return -math.log10(1.0 - q)
    return math.log10(1.0 + q)


def apply_downrating(f: float) -> float:
    """Remap a [0, 1] rating so scores below 0.25 become negative.

    (f - 0.25) / 0.25 below the threshold, (f - 0.25) / 0.75 at or above it.
    0.25 maps to 0.0 and the endpoints stay fixed, so a 0.0 rating turns into
    a -1.0 punitive update.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"rating must be in [0, 1], got {f}")
    if f < 0.25:
        return (f - 0.25) / 0.25
    return (f - 0.25) / 0.75


def compute_differential(
    records: list[RatingRecord],
    prev: ReputationState,
    params: EngineParams,
    mode: str,
) -> dict[str, float]:
    """Accrue the period's differential to each rated agent.

    Per incoming rating the term is Q*R for implicit mode, F*R for unweighted
    explicit, F*Q*R for weighted explicit (F*R again when weighting is turned
    off), where R is the rater's previous rank (default_rank for unknown
    raters, forced to 1.0 when liquid is off) and a missing explicit rating
    falls back to default_rating. Agents nobody rated are absent from the
    result.
    """
    if mode not in RATING_MODES:
        raise ValueError(f"unknown rating mode {mode!r}")
    raw: dict[str, float] = {}
    for rec in records:
        r_rater = prev.ranks.get(rec.rater, params.default_rank) if params.liquid else 1.0
        if mode == IMPLICIT:
            term = rec.value * r_rater
        else:
            f = rec.rating if rec.rating is not None else params.default_rating
            if mode == UNWEIGHTED or not params.weighting:
                term = f * r_rater
            else:
                term = f * rec.value * r_rater
        raw[rec.ratee] = raw.get(rec.ratee, 0.0) + term
    return raw


def normalize_differential(
    raw: dict[str, float], params: EngineParams
) -> dict[str, float]:
    """Squash raw differentials into [0, 1].

    With log_ranks each value first passes through the signed log scale.
    full_norm then maps min..max onto 0..1; otherwise values are divided by
    the maximum and clamped. Degenerate spreads: a flat map goes to all 1.0
    when positive and all 0.0 otherwise, and a non-positive maximum under max
    division zeroes everything.
    """
    if params.log_ranks:
        raw = {agent: apply_log_rating(v) for agent, v in raw.items()}
    if not raw:
        return {}
    mx = max(raw.values())
    mn = min(raw.values())
    if params.full_norm:
        if mx == mn:
            level = 1.0 if mx > 0 else 0.0
            return {agent: level for agent in raw}
        return {agent: (v - mn) / (mx - mn) for agent, v in raw.items()}
    if mx <= 0:
        return {agent: 0.0 for agent in raw}
    return {agent: min(max(v / mx, 0.0), 1.0) for agent, v in raw.items()}


def blend(
    prev: ReputationState, nd: dict[str, float], params: EngineParams
) -> dict[str, float]:
    """Conservatism blend over the union of known and freshly rated agents.

    R = R_prev * C + nd * (1 - C). New agents substitute default_rank for
    R_prev; known agents with no update substitute decayed_rank for nd, which
    is what makes inactive ranks decay geometrically.
    """
    c = params.conservatism
    agents = list(prev.ranks) + [a for a in nd if a not in prev.ranks]
    out = {}
    for agent in agents:
        r_prev = prev.ranks.get(agent, params.default_rank)
        r_new = nd.get(agent, params.decayed_rank)
        out[agent] = r_prev * c + r_new * (1.0 - c)
    return out


def finalize_state(blended: dict[str, float], day: int) -> ReputationState:
    """Divide by the maximum so the top agent lands exactly at 1.0.

    An all-zero blend stays all zero rather than dividing by zero.
    """
    if not blended:
        return ReputationState(day=day, ranks={})
    mx = max(blended.values())
    if mx <= 0:
        return ReputationState(day=day, ranks={agent: 0.0 for agent in blended})
    return ReputationState(day=day, ranks={agent: v / mx for agent, v in blended.items()})


def _prepare(records: list[RatingRecord], params: EngineParams) -> list[RatingRecord]:
    # steps 1-4: aggregation, precision, optional log scale, optional downrating
    if params.aggregation:
        records = aggregate_ratings(records)
    out = []
    for rec in records:
        q = apply_precision(rec.value, params.precision)
        if params.log_ratings:
            q = apply_log_rating(q)
        f = rec.rating
        if params.downrating:
            f = apply_downrating(f if f is not None else params.default_rating)
        out.append(replace(rec, rating=f, value=q))
    return out


def trace_update(
    prev: ReputationState,
    records: list[RatingRecord],
    params: EngineParams,
    mode: str,
) -> UpdateTrace:
    """Run one period update and keep every intermediate."""
    params.validate()
    day = prev.day + params.update_period
    for rec in records:
        rec.validate()
        if not prev.day < rec.day <= day:
            raise ValueError(
                f"record day {rec.day} outside the period ({prev.day}, {day}]"
            )
    prepared = _prepare(records, params)
    raw = compute_differential(prepared, prev, params, mode)
    nd = normalize_differential(raw, params)
    blended = blend(prev, nd, params)
    state = finalize_state(blended, day)
    diff = DifferentialUpdate(day=day, raw=raw, normalized=nd)
    return UpdateTrace(differential=diff, blended=blended, state=state)


def update_period(
    prev: ReputationState,
    records: list[RatingRecord],
    params: EngineParams,
    mode: str,
) -> ReputationState:
    """Compute the next reputation state from one period of ratings."""
    return trace_update(prev, records, params, mode).state
