"""Request and response models for the HTTP service."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..engine import WEIGHTED, EngineParams, RatingRecord, ReputationState
from ..market import ScenarioConfig
from ..metrics import MetricsReport


class EngineParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

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

    def to_params(self) -> EngineParams:
        return EngineParams(**self.model_dump())


class RatingRecordModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    day: int
    rater: str
    ratee: str
    rating: float | None = None
    value: float

    def to_record(self) -> RatingRecord:
        return RatingRecord(**self.model_dump())


class StateModel(BaseModel):
    day: int
    ranks: dict[str, float]

    @classmethod
    def from_state(cls, state: ReputationState) -> "StateModel":
        return cls(day=state.day, ranks=dict(state.ranks))


class CreateEngineRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: EngineParamsModel = Field(default_factory=EngineParamsModel)


class EngineResponse(BaseModel):
    engine_id: str
    state: StateModel


class RatingsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    records: list[RatingRecordModel]


class BufferedResponse(BaseModel):
    buffered: int


class UpdateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: str = WEIGHTED


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

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
    engine_params: EngineParamsModel = Field(default_factory=EngineParamsModel)

    def to_config(self) -> ScenarioConfig:
        data = self.model_dump()
        data["engine_params"] = self.engine_params.to_params()
        return ScenarioConfig(**data)


class ReportModel(BaseModel):
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

    @classmethod
    def from_report(cls, report: MetricsReport) -> "ReportModel":
        return cls(**{name: getattr(report, name) for name in cls.model_fields})


class SimulateResponse(BaseModel):
    report: ReportModel
    final_state: StateModel | None
    periods: int
    log_entries: int


class HealthResponse(BaseModel):
    status: str
