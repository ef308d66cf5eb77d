"""Incremental weighted liquid rank reputation engine with a marketplace
scam simulator, metrics, file formats, sweeps, a CLI, and an HTTP service."""

from .engine import (
    IMPLICIT,
    RATING_MODES,
    UNWEIGHTED,
    WEIGHTED,
    EngineParams,
    RatingRecord,
    ReputationState,
    trace_update,
    update_period,
)
from .formats import RunBundle, parse_scenario, read_bundle, write_bundle, write_scenario
from .market import Agent, LogEntry, ScenarioConfig, TransactionLog, run_scenario
from .metrics import MetricsReport, build_report
from .sweep import PRESETS, SweepSpec, run_sweep

__version__ = "0.1.0"

__all__ = [
    "IMPLICIT",
    "UNWEIGHTED",
    "WEIGHTED",
    "RATING_MODES",
    "EngineParams",
    "RatingRecord",
    "ReputationState",
    "trace_update",
    "update_period",
    "RunBundle",
    "parse_scenario",
    "write_scenario",
    "read_bundle",
    "write_bundle",
    "Agent",
    "LogEntry",
    "ScenarioConfig",
    "TransactionLog",
    "run_scenario",
    "MetricsReport",
    "build_report",
    "PRESETS",
    "SweepSpec",
    "run_sweep",
    "__version__",
]
