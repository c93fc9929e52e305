"""Command-line entry point: run sweeps, summarize results, check configs."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .errors import ConfigError, PinchSecError
from .experiments import (load_sweep_spec, read_results_csv, run_sweep,
                          summarize, write_summary_csv)
from .scenario import load_scenario, scenario_to_mapping


def _cmd_run(args) -> int:
    spec = load_sweep_spec(args.sweep)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    rows = run_sweep(spec, out_dir=args.out, jobs=args.jobs)
    n_fail = sum(not r.feasible for r in rows)
    print(f"wrote {len(rows)} rows to {Path(args.out) / 'results.csv'}"
          f" ({n_fail} infeasible)")
    return 0


def _cmd_summarize(args) -> int:
    rows = read_results_csv(args.input)
    write_summary_csv(summarize(rows), args.out)
    print(f"wrote summary to {args.out}")
    return 0


def _cmd_scenario(args) -> int:
    try:
        scn = load_scenario(args.check)
    except (ConfigError, PinchSecError, OSError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 2
    print(yaml.safe_dump(scenario_to_mapping(scn), sort_keys=True), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchsec",
        description="Pinching-antenna secrecy-rate experiments")
    sub = parser.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="run a sweep spec and write CSV results")
    run.add_argument("--sweep", required=True, help="sweep spec YAML file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None,
                     help="override the spec's base seed")
    run.add_argument("--trials", type=int, default=None,
                     help="override the spec's trial count")
    run.add_argument("--jobs", type=int, default=1,
                     help="worker processes (default 1)")
    run.set_defaults(func=_cmd_run)

    summ = sub.add_parser("summarize", help="aggregate a results CSV")
    summ.add_argument("--in", dest="input", required=True)
    summ.add_argument("--out", required=True)
    summ.set_defaults(func=_cmd_summarize)

    scen = sub.add_parser("scenario", help="validate a scenario config")
    scen.add_argument("--check", required=True, help="scenario YAML file")
    scen.set_defaults(func=_cmd_scenario)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, PinchSecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
