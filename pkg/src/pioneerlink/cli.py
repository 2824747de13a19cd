"""Command-line front end.

Subcommands:
  simulate <scenario-file> [--preset figN] [--out PATH] [--threads N]
      Run the sweep described by the scenario file and emit CSV (stdout by
      default).
  report improvement --baseline S --target S --zenith-max DEG
      [--scenario FILE] [--out PATH] [--threads N]
      Run the sweep and print the worst-case rate improvement per
      (altitude, separation) pair as an aligned table, or CSV with --out.
  params dump
      Print the effective defaults in scenario-file form.

Exit codes: 0 success; 1 configuration error; 2 numeric failure on one or
more grid points (rows carry the failure in their status column).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .budget import Scheme
from .scenario import (
    PRESET_COLUMNS,
    Scenario,
    ScenarioError,
    default_scenario_text,
    emit_csv,
    format_report_text,
    improvement_report,
    load_scenario,
    run_sweep,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pioneerlink",
        description="Link budgets and key rates for ground-to-LEO optical links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a sweep and emit CSV")
    sim.add_argument("scenario", help="scenario file (key = value lines)")
    sim.add_argument(
        "--preset", choices=sorted(PRESET_COLUMNS), default=None,
        help="restrict output columns to one published-figure layout",
    )
    sim.add_argument("--out", default=None, help="CSV path (default: stdout)")
    sim.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: CPU count)")

    rep = sub.add_parser("report", help="derived comparison reports")
    rep_sub = rep.add_subparsers(dest="report_kind", required=True)
    imp = rep_sub.add_parser(
        "improvement", help="worst-case rate improvement of target over baseline"
    )
    imp.add_argument("--baseline", required=True, help="baseline scheme name")
    imp.add_argument("--target", required=True, help="target scheme name")
    imp.add_argument("--zenith-max", required=True, type=float,
                     help="largest zenith angle (degrees) included")
    imp.add_argument("--scenario", default=None,
                     help="scenario file (default: built-in defaults)")
    imp.add_argument("--out", default=None,
                     help="write the report as CSV here instead of text output")
    imp.add_argument("--threads", type=int, default=None)

    par = sub.add_parser("params", help="parameter utilities")
    par_sub = par.add_subparsers(dest="params_kind", required=True)
    par_sub.add_parser("dump", help="print effective defaults as a scenario file")

    return parser


def _parse_scheme(name: str) -> Scheme:
    try:
        return Scheme(name)
    except ValueError:
        valid = ", ".join(s.value for s in Scheme)
        raise ScenarioError(f"unknown scheme '{name}'; expected one of {valid}")


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    preset = args.preset or scenario.preset
    columns = PRESET_COLUMNS[preset] if preset else None
    rows = run_sweep(scenario, threads=args.threads)
    if args.out:
        emit_csv(rows, args.out, columns)
    else:
        emit_csv(rows, sys.stdout, columns)
    failed = sum(1 for r in rows if r.status != "ok")
    if failed:
        print(f"{failed} of {len(rows)} grid points failed", file=sys.stderr)
        return 2
    return 0


def _cmd_report_improvement(args: argparse.Namespace) -> int:
    baseline = _parse_scheme(args.baseline)
    target = _parse_scheme(args.target)
    scenario = load_scenario(args.scenario) if args.scenario else Scenario()
    needed = {baseline, target}
    if not needed.issubset(set(scenario.schemes)):
        missing = ", ".join(s.value for s in needed - set(scenario.schemes))
        raise ScenarioError(f"scenario sweep does not include scheme(s): {missing}")
    rows = run_sweep(scenario, threads=args.threads)
    try:
        report = improvement_report(rows, baseline, target, args.zenith_max)
    except ValueError as exc:
        raise ScenarioError(str(exc))
    if args.out:
        lines = ["baseline,target,h_alt,L,zenith_max_deg,improvement_pct"]
        for r in report:
            value = (
                format(r.improvement_pct, ".9g")
                if r.improvement_pct is not None else r.note
            )
            lines.append(
                f"{r.baseline},{r.target},{format(r.h_alt, '.9g')},"
                f"{format(r.separation, '.9g')},"
                f"{format(r.zenith_max_deg, '.9g')},{value}"
            )
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write("\n".join(lines) + "\n")
        except OSError as exc:
            raise ScenarioError(f"cannot write report to {args.out}: {exc}")
    else:
        sys.stdout.write(format_report_text(report))
    failed = sum(1 for r in rows if r.status != "ok")
    if failed:
        print(f"{failed} of {len(rows)} grid points failed", file=sys.stderr)
        return 2
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "report":
            return _cmd_report_improvement(args)
        if args.command == "params":
            sys.stdout.write(default_scenario_text())
            return 0
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
