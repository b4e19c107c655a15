"""Command-line interface: ``homefield {estimate,simulate,report,plotdata}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from ._backend import backend_name
from .errors import HomeFieldError
from .fixture import read_metadata
from .inference import VARIANCE_MODES
from .league_data import parse_matches
from .report import (
    PLOT_KINDS,
    build_bundle,
    format_table,
    input_digest,
    plot_rows,
    render,
    render_report,
    resolve_stats,
    write_csv,
)
from .simulation import SimulationConfig, run_grid, full_grid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

EXIT_CODES = """\
exit codes:
  0  success
  2  usage error (bad flags or invalid simulation settings)
  3  I/O error (unreadable input, unwritable output)
  4  schema error (missing column, non-numeric cell, duplicate fixture, unknown statistic)
  5  completeness error (a team pair lacks its mirror fixture; see --partial)
  6  rank error (fewer than 3 teams, or partial design not identifying every team)
"""


class UsageError(Exception):
    pass


def _add_data_args(p):
    p.add_argument("--input", required=True, help="fixture CSV (home_team, away_team, <stat>_home, <stat>_away, ...)")
    p.add_argument("--stat", default="all", help="statistic name, comma list, or 'all' (default)")
    p.add_argument("--alpha", type=float, default=0.05, help="1 - confidence level (default 0.05)")
    p.add_argument("--variance-mode", choices=VARIANCE_MODES, default="total")
    p.add_argument("--partial", action="store_true", help="drop pairs missing a mirror fixture instead of failing")
    p.add_argument("--df-correction", action="store_true", help="divide residual SS by rows - teams")
    p.add_argument("--output", help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homefield",
        description="Team and league home-field advantage from double round-robin match statistics.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"homefield {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="team and league effects for each statistic", epilog=EXIT_CODES,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_data_args(est)
    est.add_argument("--format", choices=("table", "csv", "json"), default="table")

    rep = sub.add_parser("report", help="summary statistics and league-effect table", epilog=EXIT_CODES,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_data_args(rep)
    rep.add_argument("--format", choices=("table", "csv", "json"), default="table")

    plot = sub.add_parser("plotdata", help="tidy CSV for team CI, p-value, or net-difference charts",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_data_args(plot)
    plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    plot.add_argument("--standardize", action="store_true",
                      help="not supported: values are always emitted on the raw statistic scale")

    sim = sub.add_parser("simulate", help="Monte Carlo study (one cell or the full grid)", epilog=EXIT_CODES,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    sim.add_argument("--scenario", type=int, choices=(1, 2))
    sim.add_argument("--teams", type=int)
    sim.add_argument("--sigma0-sq", type=float)
    sim.add_argument("--reps", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=2021)
    sim.add_argument("--alpha", type=float, default=0.05)
    sim.add_argument("--variance-mode", choices=VARIANCE_MODES, default="total")
    sim.add_argument("--grid", choices=("table2",), help="run every scenario x teams x sigma0_sq cell")
    sim.add_argument("--jobs", type=int, default=1, help="worker processes for grid cells (default 1)")
    sim.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sim.add_argument("--output")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args):
    raw = Path(args.input).read_text(encoding="utf-8")
    matches = parse_matches(raw)
    stats = resolve_stats(matches, args.stat)
    meta = {"input_sha256": input_digest(raw)}
    generator = read_metadata(raw)
    if generator and "seed" in generator:
        meta["seed"] = generator["seed"]
    if not 0.0 < args.alpha < 1.0:
        raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
    bundle = build_bundle(
        matches,
        stats,
        alpha=args.alpha,
        variance_mode=args.variance_mode,
        partial=args.partial,
        df_correction=args.df_correction,
        metadata=meta,
    )
    return matches, stats, bundle


def cmd_estimate(args) -> None:
    _, _, bundle = _load(args)
    _emit(render(bundle, args.format), args.output)


def cmd_report(args) -> None:
    matches, _, bundle = _load(args)
    _emit(render_report(matches, bundle, args.format), args.output)


def cmd_plotdata(args) -> None:
    if args.standardize:
        raise UsageError("--standardize is not supported; plot data is emitted on the raw statistic scale")
    matches, stats, bundle = _load(args)
    _emit(write_csv(plot_rows(args.kind, bundle, matches, stats)), args.output)


SIM_TABLE_COLUMNS = ("scenario", "n", "sigma0_sq", "bias", "cp", "sv", "mv", "beta_cp")


def cmd_simulate(args) -> None:
    if args.reps < 2:
        raise UsageError("--reps must be at least 2")
    try:
        if args.grid:
            configs = full_grid(seed=args.seed, replicates=args.reps, variance_mode=args.variance_mode,
                                  level=args.alpha)
        else:
            missing = [f for f in ("scenario", "teams", "sigma0_sq") if getattr(args, f) is None]
            if missing:
                raise UsageError("without --grid, --scenario, --teams and --sigma0-sq are required")
            configs = [SimulationConfig(args.scenario, args.teams, args.sigma0_sq, replicates=args.reps,
                                        seed=args.seed, level=args.alpha, variance_mode=args.variance_mode)]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [m.row() for m in run_grid(configs, jobs=args.jobs)]
    if args.format == "json":
        meta = {"tool": "homefield", "version": __version__, "backend": backend_name(), "seed": args.seed,
                "replicates": args.reps, "variance_mode": args.variance_mode, "alpha": args.alpha}
        text = json.dumps({"metadata": meta, "rows": rows}, indent=2) + "\n"
    elif args.format == "csv":
        text = write_csv(rows)
    else:
        table = [tuple(r[c] for c in SIM_TABLE_COLUMNS) for r in rows]
        text = format_table(SIM_TABLE_COLUMNS, table, decimals=4)
    _emit(text, args.output)


COMMANDS = {"estimate": cmd_estimate, "report": cmd_report, "plotdata": cmd_plotdata, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"homefield: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HomeFieldError as exc:
        print(f"homefield: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"homefield: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
