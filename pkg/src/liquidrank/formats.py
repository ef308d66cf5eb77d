"""Plain-text file formats: scenario configs, ratings logs, state snapshots,
and metric reports.

Everything is diff-able text. Configs and reports are flat key=value lines,
logs and snapshots are comma-separated with a fixed header. Writers are
deterministic byte-for-byte for equal inputs and every format round-trips
exactly (floats are serialized with repr, so no precision is lost).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields as dataclass_fields
from pathlib import Path

from .engine import EngineParams, RatingRecord, ReputationState
from .market import LogEntry, ScenarioConfig, TransactionLog
from .metrics import MetricsReport

UNDEFINED = "undefined"

_SCENARIO_KEYS = (
    "n_agents",
    "days",
    "seed",
    "good_fraction",
    "consumer_fraction",
    "bad_tx_rate_multiplier",
    "good_value_ratio",
    "good_tx_per_day",
    "base_bad_value",
    "usage_mode",
    "rating_mode",
    "selection_threshold",
)
_ENGINE_KEYS = tuple(f.name for f in dataclass_fields(EngineParams))
_REQUIRED_KEYS = ("n_agents", "days", "seed")
_KEY_ALIASES = {"threshold": "selection_threshold"}
_INT_KEYS = {"n_agents", "days", "seed", "bad_tx_rate_multiplier", "update_period"}
_BOOL_KEYS = {
    "weighting",
    "full_norm",
    "liquid",
    "log_ranks",
    "log_ratings",
    "aggregation",
    "downrating",
}
_STR_KEYS = {"usage_mode"}
_OPTIONAL_STR_KEYS = {"rating_mode"}

RATINGS_HEADER = ("day", "rater", "ratee", "rating", "value", "rater_good", "ratee_good")
STATES_HEADER = ("day", "agent", "rank")
REPORT_KEYS = (
    "loss_to_scam",
    "profit_from_scam",
    "pearson_avg",
    "pearson_latest",
    "acc_good",
    "acc_bad",
    "acc_mean",
    "rmsd_good",
    "rmsd_bad",
    "rmsd_mean",
    "volume_good",
    "volume_bad",
    "volume_good_to_bad",
    "volume_ratio",
)


@dataclass(frozen=True)
class RunBundle:
    """One simulation's full output set, as written to an output directory."""

    config: ScenarioConfig
    log: TransactionLog
    states: list[ReputationState]
    report: MetricsReport


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def _parse_bool(raw: str, key: str, line_no: int) -> bool:
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise ValueError(f"line {line_no}: invalid value for key '{key}': {raw!r} (expected true or false)")


def _fmt_value(value: object) -> str:
    if isinstance(value, bool):
        return _fmt_bool(value)
    if value is None:
        return "none"
    return repr(value) if isinstance(value, float) else str(value)


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse a flat key=value scenario config.

    Blank lines and # comments are skipped. Unknown and duplicate keys are
    rejected with their line number; out-of-range values are rejected naming
    the offending key. Keys beyond n_agents, days, and seed are optional.
    """
    raw_values: dict[str, str] = {}
    key_lines: dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"line {line_no}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        key = _KEY_ALIASES.get(key, key)
        if key not in _SCENARIO_KEYS and key not in _ENGINE_KEYS:
            raise ValueError(f"line {line_no}: unknown key '{key}'")
        if key in raw_values:
            raise ValueError(f"line {line_no}: duplicate key '{key}'")
        raw_values[key] = raw
        key_lines[key] = line_no

    for key in _REQUIRED_KEYS:
        if key not in raw_values:
            raise ValueError(f"missing required key '{key}'")

    scenario_kwargs: dict[str, object] = {}
    engine_kwargs: dict[str, object] = {}
    for key, raw in raw_values.items():
        line_no = key_lines[key]
        if key in _BOOL_KEYS:
            value: object = _parse_bool(raw, key, line_no)
        elif key in _STR_KEYS:
            value = raw
        elif key in _OPTIONAL_STR_KEYS:
            value = None if raw == "none" else raw
        elif key in _INT_KEYS:
            try:
                value = int(raw)
            except ValueError:
                raise ValueError(f"line {line_no}: invalid value for key '{key}': {raw!r}") from None
        else:
            try:
                value = float(raw)
            except ValueError:
                raise ValueError(f"line {line_no}: invalid value for key '{key}': {raw!r}") from None
        if key in _ENGINE_KEYS:
            engine_kwargs[key] = value
        else:
            scenario_kwargs[key] = value

    config = ScenarioConfig(engine_params=EngineParams(**engine_kwargs), **scenario_kwargs)
    try:
        config.validate()
    except ValueError as exc:
        message = str(exc)
        for key, line_no in key_lines.items():
            if key in message:
                raise ValueError(f"line {line_no}: {message}") from None
        raise
    return config


def write_scenario(config: ScenarioConfig) -> str:
    """Render a config with every key explicit, in canonical order."""
    lines = []
    for key in _SCENARIO_KEYS:
        lines.append(f"{key}={_fmt_value(getattr(config, key))}")
    for key in _ENGINE_KEYS:
        lines.append(f"{key}={_fmt_value(getattr(config.engine_params, key))}")
    return "\n".join(lines) + "\n"


def write_ratings_log(log: TransactionLog, path: str | Path) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RATINGS_HEADER)
    for entry in log.entries:
        rec = entry.record
        writer.writerow(
            (
                rec.day,
                rec.rater,
                rec.ratee,
                "" if rec.rating is None else repr(rec.rating),
                repr(rec.value),
                _fmt_bool(entry.rater_good),
                _fmt_bool(entry.ratee_good),
            )
        )
    Path(path).write_text(buffer.getvalue())


def read_ratings_log(path: str | Path) -> TransactionLog:
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != RATINGS_HEADER:
        raise ValueError(f"{path}: expected header {','.join(RATINGS_HEADER)}")
    entries: list[LogEntry] = []
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(RATINGS_HEADER):
            raise ValueError(f"{path} row {row_no}: expected {len(RATINGS_HEADER)} fields, got {len(row)}")
        try:
            day = int(row[0])
            rating = None if row[3] == "" else float(row[3])
            value = float(row[4])
        except ValueError:
            raise ValueError(f"{path} row {row_no}: malformed numeric field") from None
        if rating is not None and not 0.0 <= rating <= 1.0:
            raise ValueError(f"{path} row {row_no}: rating out of range [0, 1]: {rating}")
        if value < 0.0:
            raise ValueError(f"{path} row {row_no}: negative value: {value}")
        record = RatingRecord(day=day, rater=row[1], ratee=row[2], rating=rating, value=value)
        entries.append(
            LogEntry(
                record=record,
                rater_good=_parse_bool(row[5], "rater_good", row_no),
                ratee_good=_parse_bool(row[6], "ratee_good", row_no),
            )
        )
    return TransactionLog(entries=entries)


def write_states(states: list[ReputationState], path: str | Path) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(STATES_HEADER)
    for state in states:
        for agent in sorted(state.ranks):
            writer.writerow((state.day, agent, repr(state.ranks[agent])))
    Path(path).write_text(buffer.getvalue())


def read_states(path: str | Path) -> list[ReputationState]:
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != STATES_HEADER:
        raise ValueError(f"{path}: expected header {','.join(STATES_HEADER)}")
    states: list[ReputationState] = []
    current_day: int | None = None
    ranks: dict[str, float] = {}
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ValueError(f"{path} row {row_no}: expected 3 fields, got {len(row)}")
        try:
            day = int(row[0])
            rank = float(row[2])
        except ValueError:
            raise ValueError(f"{path} row {row_no}: malformed numeric field") from None
        if day != current_day:
            if current_day is not None:
                states.append(ReputationState(day=current_day, ranks=ranks))
            current_day = day
            ranks = {}
        ranks[row[1]] = rank
    if current_day is not None:
        states.append(ReputationState(day=current_day, ranks=ranks))
    return states


def write_report(report: MetricsReport, path: str | Path) -> None:
    lines = []
    for key in REPORT_KEYS:
        value = getattr(report, key)
        lines.append(f"{key}={UNDEFINED if value is None else repr(value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_report(path: str | Path) -> MetricsReport:
    values: dict[str, float | None] = {}
    for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        key, _, raw = stripped.partition("=")
        if key not in REPORT_KEYS:
            raise ValueError(f"{path} line {line_no}: unknown key '{key}'")
        if key in values:
            raise ValueError(f"{path} line {line_no}: duplicate key '{key}'")
        try:
            values[key] = None if raw == UNDEFINED else float(raw)
        except ValueError:
            raise ValueError(f"{path} line {line_no}: invalid value for key '{key}': {raw!r}") from None
    missing = [key for key in REPORT_KEYS if key not in values]
    if missing:
        raise ValueError(f"{path}: missing keys {missing}")
    return MetricsReport(**values)


def write_bundle(bundle: RunBundle, out_dir: str | Path) -> None:
    """Write config.txt, ratings.csv, states.csv, and report.txt into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(write_scenario(bundle.config))
    write_ratings_log(bundle.log, out / "ratings.csv")
    write_states(bundle.states, out / "states.csv")
    write_report(bundle.report, out / "report.txt")


def read_bundle(out_dir: str | Path) -> RunBundle:
    out = Path(out_dir)
    return RunBundle(
        config=parse_scenario((out / "config.txt").read_text()),
        log=read_ratings_log(out / "ratings.csv"),
        states=read_states(out / "states.csv"),
        report=read_report(out / "report.txt"),
    )
