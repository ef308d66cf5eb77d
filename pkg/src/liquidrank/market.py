"""Agent-based marketplace simulation.

A population splits into good and bad agents, and within each class into
consumers and suppliers (or everyone holds both roles in overlap mode). Good
consumers buy daily and rate honestly: positive grades for good service, 0.0
plus a permanent personal blacklist entry for a scam. Bad agents pump their
own suppliers with fake 1.0 ratings at a multiple of the honest transaction
rate, but spend far less per transaction.

When reputation is in use, good consumers only buy from suppliers at or above
the selection threshold and simply skip a purchase when nobody qualifies.
Ranks are recomputed at the end of every observation period; in usage mode
"none" they are still computed for measurement but never shown to agents.

Runs are deterministic: one seeded generator drives every draw, agents are
iterated in spawn order, and each day's records are sorted by rater then
ratee before they are logged or fed to the engine.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .engine import (
    RATING_MODES,
    WEIGHTED,
    IMPLICIT,
    EngineParams,
    RatingRecord,
    ReputationState,
    update_period,
)
from .metrics import MetricsReport, build_report

USAGE_MODES = ("none",) + RATING_MODES
CONSUMER_FRACTIONS = (1.0, 0.5, 0.8, 0.9)
GOOD_RATING_GRADES = (0.25, 0.5, 0.75, 1.0)
MAX_AGENTS = 10000


@dataclass(frozen=True)
class ScenarioConfig:
    n_agents: int
    days: int
    seed: int
    good_fraction: float = 0.8
    consumer_fraction: float = 0.9
    bad_tx_rate_multiplier: int = 10
    good_value_ratio: float = 20.0
    good_tx_per_day: float = 1.0
    base_bad_value: float = 1.0
    usage_mode: str = "none"
    rating_mode: str | None = None
    selection_threshold: float = 0.4
    engine_params: EngineParams = field(default_factory=EngineParams)

    def validate(self) -> None:
        if not 2 <= self.n_agents <= MAX_AGENTS:
            raise ValueError(f"n_agents must be in [2, {MAX_AGENTS}], got {self.n_agents}")
        if self.days < 1:
            raise ValueError(f"days must be >= 1, got {self.days}")
        if not 0.0 <= self.good_fraction <= 1.0:
            raise ValueError(f"good_fraction must be in [0, 1], got {self.good_fraction}")
        if self.consumer_fraction not in CONSUMER_FRACTIONS:
            raise ValueError(
                f"consumer_fraction must be one of {CONSUMER_FRACTIONS}, "
                f"got {self.consumer_fraction}"
            )
        if self.bad_tx_rate_multiplier < 1:
            raise ValueError(
                f"bad_tx_rate_multiplier must be >= 1, got {self.bad_tx_rate_multiplier}"
            )
        if self.good_value_ratio <= 0:
            raise ValueError(f"good_value_ratio must be positive, got {self.good_value_ratio}")
        if self.good_tx_per_day <= 0:
            raise ValueError(f"good_tx_per_day must be positive, got {self.good_tx_per_day}")
        if self.base_bad_value <= 0:
            raise ValueError(f"base_bad_value must be positive, got {self.base_bad_value}")
        if self.usage_mode not in USAGE_MODES:
            raise ValueError(f"usage_mode must be one of {USAGE_MODES}, got {self.usage_mode!r}")
        if self.rating_mode is not None and self.rating_mode not in RATING_MODES:
            raise ValueError(
                f"rating_mode must be one of {RATING_MODES}, got {self.rating_mode!r}"
            )
        if not 0.0 <= self.selection_threshold <= 1.0:
            raise ValueError(
                f"selection_threshold must be in [0, 1], got {self.selection_threshold}"
            )
        self.engine_params.validate()

    @property
    def rating_kind(self) -> str:
        """The rating signal the engine consumes.

        Follows usage_mode when agents actually use reputation; in usage mode
        none the measurement kind is rating_mode, defaulting to weighted
        explicit ratings.
        """
        if self.usage_mode != "none":
            return self.usage_mode
        return self.rating_mode if self.rating_mode is not None else WEIGHTED


@dataclass
class Agent:
    id: str
    goodness: bool
    role: str  # consumer, supplier, or both
    blacklist: set[str] = field(default_factory=set)

    @property
    def consumes(self) -> bool:
        return self.role != "supplier"

    @property
    def supplies(self) -> bool:
        return self.role != "consumer"


@dataclass(frozen=True)
class LogEntry:
    record: RatingRecord
    rater_good: bool
    ratee_good: bool


@dataclass(frozen=True)
class TransactionLog:
    entries: list[LogEntry]


def spawn_population(config: ScenarioConfig, rng: random.Random) -> list[Agent]:
    """Create agents in deterministic order: good consumers, good suppliers,
    bad consumers, bad suppliers (overlap mode: good, then bad, all dual-role).

    The consumer fraction splits each goodness class independently; a split
    that leaves a non-empty class without consumers or without suppliers is
    rejected as degenerate.
    """
    n_good = round(config.n_agents * config.good_fraction)
    n_bad = config.n_agents - n_good
    agents: list[Agent] = []
    counter = 0

    def take(count: int, goodness: bool, role: str) -> None:
        nonlocal counter
        for _ in range(count):
            agents.append(Agent(id=f"a{counter:04d}", goodness=goodness, role=role))
            counter += 1

    if config.consumer_fraction == 1.0:
        take(n_good, True, "both")
        take(n_bad, False, "both")
        return agents

    for class_n, goodness in ((n_good, True), (n_bad, False)):
        n_cons = round(class_n * config.consumer_fraction)
        n_sup = class_n - n_cons
        if class_n > 0 and (n_cons == 0 or n_sup == 0):
            raise ValueError(
                f"degenerate split: {'good' if goodness else 'bad'} class of "
                f"{class_n} agents yields {n_cons} consumers and {n_sup} suppliers"
            )
        take(n_cons, goodness, "consumer")
        take(n_sup, goodness, "supplier")
    return agents


def select_supplier(
    consumer: Agent,
    suppliers: list[Agent],
    reputation: ReputationState | None,
    config: ScenarioConfig,
    rng: random.Random,
) -> Agent | None:
    """Pick this attempt's supplier, or None to skip the purchase.

    Good consumers choose uniformly among non-blacklisted suppliers; with
    reputation in use the choice further narrows to suppliers whose current
    rank clears the threshold (unknown suppliers count at default_rank). No
    state exists before the first period ends, so until then everyone buys
    blind. Bad consumers only ever deal with bad suppliers.
    """
    if not consumer.goodness:
        pool = [s for s in suppliers if not s.goodness and s.id != consumer.id]
        return rng.choice(pool) if pool else None
    pool = [
        s for s in suppliers if s.id != consumer.id and s.id not in consumer.blacklist
    ]
    if config.usage_mode != "none" and reputation is not None:
        d = config.engine_params.default_rank
        pool = [
            s
            for s in pool
            if reputation.ranks.get(s.id, d) >= config.selection_threshold
        ]
    return rng.choice(pool) if pool else None


def emit_rating(
    consumer: Agent,
    supplier: Agent,
    day: int,
    config: ScenarioConfig,
    rng: random.Random,
) -> RatingRecord:
    """Settle one transaction: spend, rate, and remember scams.

    Good consumers pay base value times the good value ratio; a good supplier
    earns a uniform positive grade, a bad one earns 0.0 and a permanent spot
    on the consumer's blacklist. Bad consumers pay the base value and always
    rate 1.0. Under the implicit rating kind the explicit score is dropped
    from the record and only the financial value carries signal.
    """
    if consumer.goodness:
        value = config.base_bad_value * config.good_value_ratio
        if supplier.goodness:
            rating = rng.choice(GOOD_RATING_GRADES)
        else:
            rating = 0.0
            consumer.blacklist.add(supplier.id)
    else:
        value = config.base_bad_value
        rating = 1.0
    if config.rating_kind == IMPLICIT:
        return RatingRecord(day=day, rater=consumer.id, ratee=supplier.id, rating=None, value=value)
    return RatingRecord(day=day, rater=consumer.id, ratee=supplier.id, rating=rating, value=value)


def _attempts_today(rate: float, day: int) -> int:
    # drift-free fractional rates: attempts up to day k total floor(rate * k)
    return math.floor(rate * day) - math.floor(rate * (day - 1))


def run_scenario(
    config: ScenarioConfig,
) -> tuple[TransactionLog, list[ReputationState], MetricsReport]:
    """Simulate the full horizon and score it.

    Each day every consumer makes its attempts, ratings accumulate, and at
    the end of every update_period the engine folds them into the next
    reputation state. A trailing partial period produces no state. Metrics
    are computed over the supplier population.
    """
    config.validate()
    rng = random.Random(config.seed)
    agents = spawn_population(config, rng)
    suppliers = [a for a in agents if a.supplies]
    consumers = [a for a in agents if a.consumes]
    params = config.engine_params
    kind = config.rating_kind

    entries: list[LogEntry] = []
    states: list[ReputationState] = []
    state: ReputationState | None = None
    period_records: list[RatingRecord] = []

    for day in range(1, config.days + 1):
        good_attempts = _attempts_today(config.good_tx_per_day, day)
        day_records: list[tuple[RatingRecord, bool, bool]] = []
        for consumer in consumers:
            attempts = good_attempts
            if not consumer.goodness:
                attempts *= config.bad_tx_rate_multiplier
            for _ in range(attempts):
                supplier = select_supplier(consumer, suppliers, state, config, rng)
                if supplier is None:
                    continue
                record = emit_rating(consumer, supplier, day, config, rng)
                day_records.append((record, consumer.goodness, supplier.goodness))
        day_records.sort(key=lambda item: (item[0].rater, item[0].ratee))
        for record, rater_good, ratee_good in day_records:
            entries.append(LogEntry(record=record, rater_good=rater_good, ratee_good=ratee_good))
            period_records.append(record)
        if day % params.update_period == 0:
            prev = state if state is not None else ReputationState(
                day=day - params.update_period, ranks={}
            )
            state = update_period(prev, period_records, params, kind)
            states.append(state)
            period_records = []

    log = TransactionLog(entries=entries)
    expected = {a.id: 1.0 if a.goodness else 0.0 for a in suppliers}
    report = build_report(log, states, expected, default_rank=params.default_rank)
    return log, states, report
