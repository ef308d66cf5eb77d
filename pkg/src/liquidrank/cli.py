"""Command line front end.

Subcommands:
  simulate  run one scenario from a config file and write its output bundle
  sweep     run a named grid across seeds and write a summary CSV
  report    render a stored sweep CSV as an aligned text table
  serve     start the HTTP service

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .formats import RunBundle, parse_scenario, write_bundle
from .market import run_scenario
from .sweep import (
    PRESETS,
    SweepSpec,
    default_workers,
    read_sweep,
    render_table,
    run_sweep,
    write_sweep,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for runtime
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_seeds(spec: str) -> tuple[int, ...]:
    """Seed list syntax: a single integer, 'a..b' inclusive, or 'a,b,c'."""
    try:
        if ".." in spec:
            lo, _, hi = spec.partition("..")
            start, stop = int(lo), int(hi)
            if stop < start:
                raise ValueError
            return tuple(range(start, stop + 1))
        if "," in spec:
            return tuple(int(part) for part in spec.split(","))
        return (int(spec),)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid seed list {spec!r}; use N, A..B, or A,B,C"
        ) from None


def build_parser() -> _Parser:
    parser = _Parser(prog="liquidrank", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sim = sub.add_parser("simulate", help="run one scenario")
    p_sim.add_argument("--config", required=True, help="scenario config file")
    p_sim.add_argument("--out", required=True, help="output bundle directory")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid")
    p_sweep.add_argument("--grid", default="modes", help="modes|params (aliases: fig1, fig2)")
    p_sweep.add_argument("--preset", default="medium", choices=sorted(PRESETS))
    p_sweep.add_argument("--seeds", type=parse_seeds, default=(1,), help="N, A..B, or A,B,C")
    p_sweep.add_argument("--out", required=True, help="summary CSV path")
    p_sweep.add_argument("--workers", type=int, default=None, help="parallel cells")

    p_report = sub.add_parser("report", help="render a stored sweep")
    p_report.add_argument("sweep_csv", help="sweep CSV written by the sweep subcommand")
    p_report.add_argument("--out", default=None, help="write the table here instead of stdout")

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = parse_scenario(Path(args.config).read_text())
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    log, states, report = run_scenario(config)
    write_bundle(RunBundle(config=config, log=log, states=states, report=report), args.out)
    print(f"wrote bundle to {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    workers = args.workers if args.workers is not None else default_workers()
    spec = SweepSpec(grid=args.grid, preset=args.preset, seeds=args.seeds, workers=workers)
    rows = run_sweep(spec, echo=print)
    write_sweep(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    table = render_table(read_sweep(args.sweep_csv))
    if args.out is None:
        sys.stdout.write(table)
    else:
        Path(args.out).write_text(table)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "report": _cmd_report,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except Exception as exc:
        print(f"liquidrank: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
