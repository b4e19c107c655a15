"""Synthetic league fixtures with known generator parameters.

The bundled ``data/epl_synthetic.csv`` is ``generate_fixture(seed=2021)``: 20
teams, a complete double round-robin and eleven statistics whose per-side means
and spreads are shaped like a Premier League season.  The generator's
parameters, including the realized team effects, are written into a
``# generator:`` JSON comment above the header.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .league_data import AWAY_COL, HOME_COL

# name, mean home, mean away, overall SD, league home effect
EPL_STATS = (
    ("attacks_with_shot", 11.547, 9.979, 4.910, 1.568),
    ("defence_interceptions", 42.639, 44.637, 11.287, -1.997),
    ("reaching_opponent_box", 14.779, 13.097, 6.135, 1.732),
    ("reaching_opponent_half", 58.561, 54.968, 12.566, 3.592),
    ("shots_blocked", 3.382, 2.95, 2.273, 0.350),
    ("shots_from_box", 7.5, 6.434, 3.594, 1.066),
    ("shots_from_danger_zone", 5.058, 4.271, 2.622, 0.786),
    ("successful_key_passes", 3.584, 3.037, 2.328, 0.489),
    ("touches_in_box", 19.468, 17.216, 8.883, 2.253),
    ("expected_goals", 1.577, 1.395, 0.867, 0.232),
    ("yellow_cards", 1.447, 1.474, 1.151, -0.026),
)

# spreads relative to each statistic's overall SD
TEAM_EFFECT_SD = 0.25
ABILITY_SD = 0.6
NOISE_SD = 1.2

BUNDLED_FIXTURE = "epl_synthetic.csv"
METADATA_PREFIX = "# generator: "


def generate_fixture(seed: int = 2021, n_teams: int = 20, null: bool = False, decimals: int = 3):
    """Return ``(csv_text, metadata)`` for a complete synthetic season.

    ``null=True`` sets every team's home effect to exactly zero.
    """
    rng = np.random.default_rng(seed)
    labels = [f"Team{k + 1:02d}" for k in range(n_teams)]
    cols = {}
    meta_stats = {}
    for name, mean_home, mean_away, sd, delta in EPL_STATS:
        if null:
            delta_s, sigma_s = 0.0, 0.0
        else:
            delta_s, sigma_s = delta, TEAM_EFFECT_SD * sd
        beta = delta_s + sigma_s * rng.standard_normal(n_teams)
        ability = ABILITY_SD * sd * rng.standard_normal(n_teams)
        noise = NOISE_SD * sd / np.sqrt(2.0) * rng.standard_normal((n_teams, n_teams, 2))
        base = 0.5 * (mean_home + mean_away)
        home = base + 0.5 * (ability[:, None] - ability[None, :] + beta[:, None]) + noise[..., 0]
        away = base - 0.5 * (ability[:, None] - ability[None, :] + beta[:, None]) + noise[..., 1]
        cols[name] = (np.round(home, decimals), np.round(away, decimals))
        meta_stats[name] = {
            "delta": delta_s,
            "sigma": sigma_s,
            "sigma0": NOISE_SD * sd,
            "beta": [round(float(b), 12) for b in beta],
            "league_mean_beta": round(float(beta.mean()), 12),
        }

    header = [HOME_COL, AWAY_COL]
    for name, *_ in EPL_STATS:
        header += [f"{name}_home", f"{name}_away"]
    lines = [",".join(header)]
    for i in range(n_teams):
        for j in range(n_teams):
            if i == j:
                continue
            row = [labels[i], labels[j]]
            for name, *_ in EPL_STATS:
                h, a = cols[name]
                row += [f"{h[i, j]:.{decimals}f}", f"{a[i, j]:.{decimals}f}"]
            lines.append(",".join(row))

    metadata = {"seed": seed, "n_teams": n_teams, "null": null, "teams": labels, "stats": meta_stats}
    text = (
        "# homefield synthetic fixture (not real match data)\n"
        + METADATA_PREFIX
        + json.dumps(metadata, sort_keys=True)
        + "\n"
        + "\n".join(lines)
        + "\n"
    )
    return text, metadata


def read_metadata(raw: str) -> dict | None:
    for line in raw.splitlines():
        if not line.startswith("#"):
            break
        if line.startswith(METADATA_PREFIX):
            return json.loads(line[len(METADATA_PREFIX):])
    return None


def bundled_fixture_text() -> str:
    return resources.files("homefield").joinpath("data", BUNDLED_FIXTURE).read_text(encoding="utf-8")


def bundled_fixture_path():
    return resources.files("homefield").joinpath("data", BUNDLED_FIXTURE)
