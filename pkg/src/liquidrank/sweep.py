"""Multi-seed sweeps over market conditions and engine parameters.

A sweep grid is a list of cells; each cell fixes a good/bad value ratio, a
rating kind, and one engine parameter set. Every cell runs twice per seed,
once with consumers using reputation for supplier selection and once with
ranks computed aside for measurement only, and the summary row carries the
per-seed mean and standard deviation of every metric for both runs.

Two grids ship in-repo: "modes" crosses value ratios 10/20/100 with the
three rating kinds at default engine parameters, and "params" varies the
engine parameter set (normalization, log ratings, downrating, precision,
default rank, conservatism, decayed rank) at ratios 20 and 100. The aliases
"fig1" and "fig2" name the same grids.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields as dataclass_fields
from pathlib import Path
from statistics import fmean, pstdev
from typing import Callable

from .engine import IMPLICIT, UNWEIGHTED, WEIGHTED, EngineParams
from .market import ScenarioConfig, run_scenario
from .metrics import MetricsReport

WORKERS_ENV = "LIQUIDRANK_WORKERS"


@dataclass(frozen=True)
class Preset:
    n_agents: int
    days: int
    consumer_fraction: float


# small markets cannot sustain a 90/10 split per goodness class
PRESETS = {
    "small": Preset(n_agents=10, days=10, consumer_fraction=0.5),
    "medium": Preset(n_agents=100, days=90, consumer_fraction=0.9),
    "large": Preset(n_agents=1000, days=180, consumer_fraction=0.9),
}

GRID_ALIASES = {"fig1": "modes", "fig2": "params"}


@dataclass(frozen=True)
class CellSpec:
    index: int
    good_value_ratio: float
    rating_kind: str
    engine_params: EngineParams


@dataclass(frozen=True)
class SweepSpec:
    grid: str
    preset: str
    seeds: tuple[int, ...]
    workers: int = 1

    def validate(self) -> None:
        if resolve_grid(self.grid) not in ("modes", "params"):
            raise ValueError(f"unknown grid {self.grid!r}")
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}, expected one of {tuple(PRESETS)}")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def resolve_grid(name: str) -> str:
    return GRID_ALIASES.get(name, name)


# (full_norm, log_ratings, downrating, precision, default_rank, conservatism,
#  decayed_rank) rows at ratio 20, then at ratio 100
_PARAM_ROWS_20 = (
    (True, True, False, 0.01, 0.5, 0.5, 0.0),
    (False, True, False, 0.01, 0.5, 0.5, 0.0),
    (False, False, False, 0.01, 0.5, 0.5, 0.0),
    (False, False, False, 0.01, 0.9, 0.1, 0.0),
    (True, False, False, 0.01, 0.5, 0.5, 0.0),
    (True, False, False, 0.01, 0.1, 0.5, 0.0),
    (True, False, False, 0.01, 0.9, 0.5, 0.0),
    (True, False, False, 0.01, 0.9, 0.1, 0.0),
    (True, False, False, 0.01, 0.9, 0.9, 0.0),
    (True, False, False, 0.01, 0.5, 0.5, 0.5),
    (True, False, False, 1.0, 0.5, 0.5, 0.0),
    (True, False, False, 0.001, 0.5, 0.5, 0.0),
    (True, False, True, 0.01, 0.5, 0.5, 0.0),
    (True, False, True, 0.01, 0.9, 0.1, 0.0),
    (True, True, True, 0.01, 0.9, 0.1, 0.0),
    (False, False, True, 0.01, 0.9, 0.1, 0.0),
    (False, True, True, 0.01, 0.9, 0.1, 0.0),
)
_PARAM_ROWS_100 = (
    (True, True, False, 0.01, 0.5, 0.5, 0.0),
    (False, True, False, 0.01, 0.5, 0.5, 0.0),
    (False, False, False, 0.01, 0.5, 0.5, 0.0),
    (True, False, False, 0.01, 0.5, 0.5, 0.0),
    (True, False, False, 0.01, 0.1, 0.5, 0.0),
    (True, False, False, 0.01, 0.9, 0.5, 0.0),
    (True, False, False, 0.01, 0.9, 0.1, 0.0),
    (True, False, False, 0.01, 0.9, 0.9, 0.0),
)

_METRIC_KEYS = tuple(f.name for f in dataclass_fields(MetricsReport))

AXIS_COLUMNS = (
    "cell",
    "good_value_ratio",
    "rating_kind",
    "full_norm",
    "log_ratings",
    "downrating",
    "precision",
    "default_rank",
    "conservatism",
    "decayed_rank",
)
METRIC_COLUMNS = tuple(
    f"{prefix}_{key}_{stat}"
    for prefix in ("use", "none")
    for key in _METRIC_KEYS
    for stat in ("mean", "std")
)
SWEEP_COLUMNS = AXIS_COLUMNS + METRIC_COLUMNS

# Fig-style table column order: scam rates first, then correlation, accuracy,
# and deviation families
TABLE_METRICS = (
    "profit_from_scam",
    "loss_to_scam",
    "pearson_avg",
    "pearson_latest",
    "acc_good",
    "acc_bad",
    "acc_mean",
    "rmsd_good",
    "rmsd_bad",
    "rmsd_mean",
)


def build_cells(grid: str) -> list[CellSpec]:
    name = resolve_grid(grid)
    cells: list[CellSpec] = []
    if name == "modes":
        for ratio in (10.0, 20.0, 100.0):
            for kind in (UNWEIGHTED, WEIGHTED, IMPLICIT):
                cells.append(
                    CellSpec(
                        index=len(cells),
                        good_value_ratio=ratio,
                        rating_kind=kind,
                        engine_params=EngineParams(),
                    )
                )
        return cells
    if name == "params":
        for ratio, rows in ((20.0, _PARAM_ROWS_20), (100.0, _PARAM_ROWS_100)):
            for fn, lr, dn, prec, rd, cons, rc in rows:
                cells.append(
                    CellSpec(
                        index=len(cells),
                        good_value_ratio=ratio,
                        rating_kind=WEIGHTED,
                        engine_params=EngineParams(
                            full_norm=fn,
                            log_ratings=lr,
                            downrating=dn,
                            precision=prec,
                            default_rank=rd,
                            conservatism=cons,
                            decayed_rank=rc,
                        ),
                    )
                )
        return cells
    raise ValueError(f"unknown grid {grid!r}")


def cell_configs(cell: CellSpec, preset: Preset, seed: int) -> tuple[ScenarioConfig, ScenarioConfig]:
    """The cell's paired (reputation in use, measurement only) configs."""
    common = dict(
        n_agents=preset.n_agents,
        days=preset.days,
        seed=seed,
        consumer_fraction=preset.consumer_fraction,
        good_value_ratio=cell.good_value_ratio,
        engine_params=cell.engine_params,
    )
    use = ScenarioConfig(usage_mode=cell.rating_kind, **common)
    none = ScenarioConfig(usage_mode="none", rating_mode=cell.rating_kind, **common)
    return use, none


def _mean_std(values: list[float | None]) -> tuple[float | None, float | None]:
    defined = [v for v in values if v is not None]
    if not defined:
        return None, None
    return fmean(defined), pstdev(defined)


def run_cell(cell: CellSpec, preset_name: str, seeds: tuple[int, ...]) -> dict[str, object]:
    preset = PRESETS[preset_name]
    reports: dict[str, list[MetricsReport]] = {"use": [], "none": []}
    for seed in seeds:
        use_cfg, none_cfg = cell_configs(cell, preset, seed)
        reports["use"].append(run_scenario(use_cfg)[2])
        reports["none"].append(run_scenario(none_cfg)[2])

    row: dict[str, object] = {
        "cell": cell.index,
        "good_value_ratio": cell.good_value_ratio,
        "rating_kind": cell.rating_kind,
        "full_norm": cell.engine_params.full_norm,
        "log_ratings": cell.engine_params.log_ratings,
        "downrating": cell.engine_params.downrating,
        "precision": cell.engine_params.precision,
        "default_rank": cell.engine_params.default_rank,
        "conservatism": cell.engine_params.conservatism,
        "decayed_rank": cell.engine_params.decayed_rank,
    }
    for prefix in ("use", "none"):
        for key in _METRIC_KEYS:
            mean, std = _mean_std([getattr(r, key) for r in reports[prefix]])
            row[f"{prefix}_{key}_mean"] = mean
            row[f"{prefix}_{key}_std"] = std
    return row


def _run_cell_task(task: tuple[CellSpec, str, tuple[int, ...]]) -> dict[str, object]:
    return run_cell(*task)


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, echo: Callable[[str], None] | None = None) -> list[dict[str, object]]:
    """Execute every cell for every seed; cells run independently.

    The grid cardinality is reported through echo before any cell runs.
    """
    spec.validate()
    cells = build_cells(spec.grid)
    if echo is not None:
        echo(
            f"grid '{resolve_grid(spec.grid)}' on preset '{spec.preset}': "
            f"{len(cells)} cells x {len(spec.seeds)} seeds = "
            f"{len(cells) * len(spec.seeds)} paired runs"
        )
    tasks = [(cell, spec.preset, spec.seeds) for cell in cells]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            return list(executor.map(_run_cell_task, tasks))
    return [run_cell(*task) for task in tasks]


def _fmt_cell_value(value: object) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep(rows: list[dict[str, object]], path: str | Path) -> None:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt_cell_value(row[col]) for col in SWEEP_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def read_sweep(path: str | Path) -> list[dict[str, object]]:
    lines = Path(path).read_text().splitlines()
    if not lines or tuple(lines[0].split(",")) != SWEEP_COLUMNS:
        raise ValueError(f"{path}: unexpected sweep header")
    rows: list[dict[str, object]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(SWEEP_COLUMNS):
            raise ValueError(
                f"{path} line {line_no}: expected {len(SWEEP_COLUMNS)} fields, got {len(parts)}"
            )
        row: dict[str, object] = {}
        for col, raw in zip(SWEEP_COLUMNS, parts):
            if col == "cell":
                row[col] = int(raw)
            elif col == "rating_kind":
                row[col] = raw
            elif col in ("full_norm", "log_ratings", "downrating"):
                row[col] = raw == "true"
            elif raw == "undefined":
                row[col] = None
            else:
                row[col] = float(raw)
        rows.append(row)
    return rows


def _fmt_stat(row: dict[str, object], prefix: str, key: str) -> str:
    mean = row[f"{prefix}_{key}_mean"]
    if mean is None:
        return "undefined"
    std = row[f"{prefix}_{key}_std"]
    return f"{mean:.3f}±{std:.3f}"


def render_table(rows: list[dict[str, object]]) -> str:
    """Render a stored sweep as an aligned text table.

    One line per cell: axes, the scam rates without reputation, then every
    in-use metric as mean±std.
    """
    header = ["cell", "ratio", "kind", "params", "none_profit", "none_loss"]
    header.extend(TABLE_METRICS)
    table = [header]
    for row in rows:
        params = (
            f"fn={'T' if row['full_norm'] else 'F'} "
            f"lr={'T' if row['log_ratings'] else 'F'} "
            f"dn={'T' if row['downrating'] else 'F'} "
            f"p={row['precision']} rd={row['default_rank']} "
            f"c={row['conservatism']} rc={row['decayed_rank']}"
        )
        line = [
            str(row["cell"]),
            f"{row['good_value_ratio']:g}",
            str(row["rating_kind"]),
            params,
            _fmt_stat(row, "none", "profit_from_scam"),
            _fmt_stat(row, "none", "loss_to_scam"),
        ]
        line.extend(_fmt_stat(row, "use", key) for key in TABLE_METRICS)
        table.append(line)
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    rendered = []
    for line in table:
        rendered.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())
    return "\n".join(rendered) + "\n"
