"""Estimation bundles, their serializations, and tidy plot-data tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

from . import __version__
from ._backend import backend_name
from .estimator import build_design, solve_beta
from .inference import LeagueInference, TeamInference, infer_league, infer_teams
from .league_data import MatchSet, home_away_differences, pair_outcomes, summarize_stat

PLOT_KINDS = ("team_ci", "pvalue_scatter", "net_diff_box")


@dataclass(frozen=True)
class StatReport:
    stat: str
    labels: tuple[str, ...]
    league: LeagueInference
    teams: TeamInference
    sigma2_beta: float
    dropped: tuple = ()


@dataclass(frozen=True)
class ReportBundle:
    reports: tuple[StatReport, ...]
    metadata: dict = field(default_factory=dict)


def input_digest(raw: str) -> str:
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


def resolve_stats(matches: MatchSet, selector: str) -> list[str]:
    if selector == "all":
        return list(matches.stat_names)
    stats = [s.strip() for s in selector.split(",") if s.strip()]
    for s in stats:
        matches.check_stat(s)
    return stats


def build_bundle(
    matches: MatchSet,
    stats,
    alpha: float = 0.05,
    variance_mode: str = "total",
    partial: bool = False,
    df_correction: bool = False,
    metadata: dict | None = None,
) -> ReportBundle:
    reports = []
    for stat in stats:
        pairs = pair_outcomes(matches, stat, partial=partial)
        est = solve_beta(build_design(pairs), df_correction=df_correction)
        reports.append(
            StatReport(
                stat,
                tuple(matches.labels),
                infer_league(est, alpha, variance_mode),
                infer_teams(est, alpha),
                est.sigma2_beta_hat,
                pairs.dropped,
            )
        )
    meta = {
        "tool": "homefield",
        "version": __version__,
        "backend": backend_name(),
        "alpha": alpha,
        "variance_mode": variance_mode,
        "partial": partial,
        "df_correction": df_correction,
        "n_teams": matches.n,
        "n_matches": len(matches.matches),
    }
    meta.update(metadata or {})
    return ReportBundle(tuple(reports), meta)


def league_rows(bundle: ReportBundle) -> list[dict]:
    rows = []
    for r in bundle.reports:
        lg = r.league
        rows.append(
            {
                "statistic": r.stat,
                "delta_hat": lg.delta_hat,
                "sigma_hat": lg.se,
                "p_value": lg.p_value,
                "ci_lower": lg.ci[0],
                "ci_upper": lg.ci[1],
                "sigma2_raw": lg.sigma2_raw,
                "sigma2_hat": lg.sigma2_hat,
                "sigma2_beta": r.sigma2_beta,
                "clamped": lg.clamped,
                "dropped_pairs": len(r.dropped),
            }
        )
    return rows


def team_rows(bundle: ReportBundle) -> list[dict]:
    rows = []
    for r in bundle.reports:
        t = r.teams
        for k, label in enumerate(r.labels):
            rows.append(
                {
                    "statistic": r.stat,
                    "team": label,
                    "beta_hat": float(t.beta_hat[k]),
                    "se": float(t.se[k]),
                    "ci_lower": float(t.lower[k]),
                    "ci_upper": float(t.upper[k]),
                    "p_value": float(t.p_value[k]),
                }
            )
    return rows


def _num(x) -> str:
    # repr of a Python float is the shortest string that parses back exactly
    return repr(float(x)) if isinstance(x, float) else str(x)


def to_json(bundle: ReportBundle) -> str:
    doc = {"metadata": bundle.metadata, "league": league_rows(bundle), "teams": team_rows(bundle)}
    return json.dumps(doc, indent=2) + "\n"


def write_csv(rows: list[dict], columns=None) -> str:
    if not rows:
        return ""
    columns = columns or list(rows[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_num(row[c]) for c in columns])
    return buf.getvalue()


def to_csv(bundle: ReportBundle) -> str:
    cols = ["level", "statistic", "team", "estimate", "se", "ci_lower", "ci_upper", "p_value"]
    rows = []
    for row in league_rows(bundle):
        rows.append(
            {
                "level": "league",
                "statistic": row["statistic"],
                "team": "",
                "estimate": row["delta_hat"],
                "se": row["sigma_hat"],
                "ci_lower": row["ci_lower"],
                "ci_upper": row["ci_upper"],
                "p_value": row["p_value"],
            }
        )
    for row in team_rows(bundle):
        rows.append({"level": "team", "estimate": row["beta_hat"], **row})
    return write_csv(rows, cols)


def format_table(header, rows, decimals=3) -> str:
    def cell(v):
        if isinstance(v, float):
            return f"{v:.{decimals}f}" if math.isfinite(v) else str(v)
        return str(v)

    body = [[cell(v) for v in row] for row in rows]
    widths = [max(len(str(h)), *(len(r[k]) for r in body)) if body else len(str(h)) for k, h in enumerate(header)]
    out = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
    out.append("  ".join("-" * w for w in widths))
    for r in body:
        out.append("  ".join(c.rjust(w) if k else c.ljust(w) for k, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(out) + "\n"


def league_table(bundle: ReportBundle) -> str:
    rows = [(r["statistic"], r["delta_hat"], r["sigma_hat"], r["p_value"]) for r in league_rows(bundle)]
    return format_table(("Statistic", "Delta_hat", "sigma_hat", "P-value"), rows)


def to_table(bundle: ReportBundle) -> str:
    parts = [league_table(bundle)]
    for r in bundle.reports:
        rows = [
            (label, float(r.teams.beta_hat[k]), float(r.teams.lower[k]), float(r.teams.upper[k]), float(r.teams.p_value[k]))
            for k, label in enumerate(r.labels)
        ]
        parts.append(f"\n[{r.stat}]\n" + format_table(("Team", "beta_hat", "lower", "upper", "P-value"), rows))
    return "".join(parts)


def render(bundle: ReportBundle, fmt: str) -> str:
    if fmt == "json":
        return to_json(bundle)
    if fmt == "csv":
        return to_csv(bundle)
    if fmt == "table":
        return to_table(bundle)
    raise ValueError(f"unknown format {fmt!r}")


def summary_rows(matches: MatchSet, stats) -> list[dict]:
    out = []
    for s in stats:
        sm = summarize_stat(matches, s)
        out.append({"statistic": s, "mean_home": sm.mean_home, "mean_away": sm.mean_away, "overall_sd": sm.overall_sd})
    return out


def render_report(matches: MatchSet, bundle: ReportBundle, fmt: str) -> str:
    """Descriptive summary of each statistic plus the league-effect table."""
    stats = [r.stat for r in bundle.reports]
    summary = summary_rows(matches, stats)
    league = [
        {k: row[k] for k in ("statistic", "delta_hat", "sigma_hat", "p_value")} for row in league_rows(bundle)
    ]
    if fmt == "json":
        return json.dumps({"metadata": bundle.metadata, "summary": summary, "league": league}, indent=2) + "\n"
    if fmt == "csv":
        merged = [{**s, **lg} for s, lg in zip(summary, league)]
        return write_csv(merged)
    if fmt == "table":
        t1 = format_table(
            ("Statistic", "Mean Home", "Mean Away", "Overall SD"),
            [(r["statistic"], r["mean_home"], r["mean_away"], r["overall_sd"]) for r in summary],
        )
        return "Summary statistics\n" + t1 + "\nLeague home-field effect\n" + league_table(bundle)
    raise ValueError(f"unknown format {fmt!r}")


def plot_rows(kind: str, bundle: ReportBundle | None = None, matches: MatchSet | None = None, stats=()) -> list[dict]:
    """Tidy rows for charting, ordered by statistic then team index."""
    if kind == "team_ci":
        return [
            {k: row[k] for k in ("statistic", "team", "beta_hat", "ci_lower", "ci_upper")} for row in team_rows(bundle)
        ]
    if kind == "pvalue_scatter":
        return [{k: row[k] for k in ("statistic", "team", "p_value")} for row in team_rows(bundle)]
    if kind == "net_diff_box":
        return [
            {"statistic": s, "team": team, "pair_opponent": opp, "difference": diff}
            for s in stats
            for team, opp, diff in home_away_differences(matches, s)
        ]
    raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
