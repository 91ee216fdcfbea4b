"""Command line: ``osc3 sweep | check | scenario``.

Exit codes: 0 ok, 1 invariant failure, 2 config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checks import run_check
from .config import FIGURES, ScenarioConfig, builtin, load_config
from .errors import ConfigError, DomainError
from .sweep import SweepResult, plot_script, run_sweep

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _emit(result: SweepResult, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            result.write_csv(fh)
    else:
        result.write_csv(sys.stdout)


def _oracle_report(config: ScenarioConfig) -> int:
    """Grid checks only (5 times); used when a sweep config asks for them."""
    only = ScenarioConfig(
        schedule=config.schedule, t_start=config.t_start, t_end=config.t_end,
        samples=2, alphas=config.alphas, oracle=True, name=config.name,
    )
    report = run_check(only, max_times=2)
    oracle_lines = [c.line() for c in report.checks if c.name.startswith("oracle")]
    for line in oracle_lines + [f"FAIL  error: {e}" for e in report.errors]:
        print(line, file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _sweep(config: ScenarioConfig, out: str | None, plot: str | None) -> int:
    out = out or config.csv
    plot = plot or config.plot
    try:
        result = run_sweep(config)
    except DomainError as exc:
        print(f"osc3: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(result, out)
    if plot:
        Path(plot).write_text(plot_script(out or "sweep.csv", config.name))
    status = EXIT_OK
    if config.oracle:
        status = _oracle_report(config)
    return status


def cmd_sweep(args) -> int:
    return _sweep(load_config(args.config), args.out, None)


def cmd_scenario(args) -> int:
    return _sweep(builtin(args.name), args.out, args.plot)


def cmd_check(args) -> int:
    config = load_config(args.config)
    report = run_check(config)
    for line in report.lines():
        print(line)
    n_fail = sum(not c.passed for c in report.checks) + len(report.errors)
    print(f"{len(report.checks)} checks, {n_fail} failed")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="osc3", description="Entanglement dynamics of three coupled oscillators.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("sweep", help="sweep a configured scenario and write CSV")
    s.add_argument("--config", required=True, help="JSON scenario file")
    s.add_argument("--out", help="CSV path (default: config outputs.csv, else stdout)")
    s.set_defaults(func=cmd_sweep)
    c = sub.add_parser("check", help="run the invariant suite (and grid oracle if enabled)")
    c.add_argument("--config", required=True, help="JSON scenario file")
    c.set_defaults(func=cmd_check)
    r = sub.add_parser("scenario", help="built-in figure scenario")
    r.add_argument("name", choices=sorted(FIGURES))
    r.add_argument("--out", help="CSV path (default stdout)")
    r.add_argument("--plot", help="write a gnuplot script for the CSV")
    r.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"osc3: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
