"""Command line entry point: ``sqgvar run <scenario-file> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError
from .grid import Grid2D
from .runner import EXIT_CONFIG, EXIT_IO, run_scenario
from .scenario import load_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqgvar", description="Mild-solution SQG solver and estimate checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the checks of one scenario file")
    run.add_argument("scenario", type=Path, help="scenario file (key = value lines)")
    run.add_argument("--out", type=Path, default=None, help="output directory (default out/<scenario name>)")
    run.add_argument("--grid", type=int, default=None, metavar="N", help="override the grid size")
    run.add_argument("--seed", type=int, default=None, metavar="S", help="override the random seed")
    run.add_argument("--project-mean", action="store_true", help="subtract the mean of the data and forcing")
    run.add_argument("--strict", action="store_true", help="treat warnings as failures")
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        scenario = load_scenario(args.scenario)
        changes = {}
        if args.grid is not None:
            Grid2D(args.grid, scenario.box_side)
            changes["grid_n"] = args.grid
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.project_mean:
            changes["project_mean"] = True
        if changes:
            scenario = scenario.with_(**changes)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    out = args.out if args.out is not None else Path("out") / scenario.name
    outcome = run_scenario(scenario, out, strict=args.strict)
    stream = sys.stdout if outcome.exit_code == 0 else sys.stderr
    for r in outcome.results:
        print(f"{r.status:4}  {r.label}", file=sys.stdout)
    print(outcome.message, file=stream)
    if outcome.written:
        print(f"report: {out / 'report.txt'}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
