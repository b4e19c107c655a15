"""Match-level input: parsing fixture tables, net outcomes and mirror-fixture pairing.

Input is wide comma-separated text, one row per fixture::

    home_team,away_team,<stat>_home,<stat>_away,...

Lines starting with ``#`` before the header are metadata comments and are
ignored here (see :func:`homefield.fixture.read_metadata`).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import (
    DuplicateFixtureError,
    IncompleteSeasonError,
    ParseError,
    SchemaError,
    UnknownStatisticError,
)

HOME_COL = "home_team"
AWAY_COL = "away_team"


@dataclass(frozen=True, order=True)
class TeamId:
    index: int
    label: str


@dataclass(frozen=True)
class MatchRecord:
    home: TeamId
    away: TeamId
    stats: Mapping[str, tuple[float, float]]

    def value(self, stat: str) -> tuple[float, float]:
        try:
            return self.stats[stat]
        except KeyError:
            raise UnknownStatisticError(f"unknown statistic {stat!r}") from None


@dataclass(frozen=True)
class NetOutcome:
    home: TeamId
    away: TeamId
    value: float


@dataclass(frozen=True)
class MatchSet:
    """League roster plus the fixtures, in file order."""

    teams: tuple[TeamId, ...]
    matches: tuple[MatchRecord, ...]
    stat_names: tuple[str, ...]
    _by_pair: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        index = {(m.home.index, m.away.index): m for m in self.matches}
        object.__setattr__(self, "_by_pair", index)

    @property
    def n(self) -> int:
        return len(self.teams)

    @property
    def labels(self) -> list[str]:
        return [t.label for t in self.teams]

    def fixture(self, home: int, away: int) -> MatchRecord | None:
        return self._by_pair.get((home, away))

    def check_stat(self, stat: str) -> None:
        if stat not in self.stat_names:
            raise UnknownStatisticError(f"unknown statistic {stat!r}; have {', '.join(self.stat_names)}")


@dataclass(frozen=True)
class PairedOutcomeSet:
    """Pair sums ``Y[i, j] + Y[j, i]`` for ``i < j`` in lexicographic order.

    ``dropped`` lists the unordered pairs discarded in partial mode.
    """

    n: int
    pair_i: np.ndarray
    pair_j: np.ndarray
    sums: np.ndarray
    labels: tuple[str, ...] = ()
    stat: str = ""
    dropped: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for name in ("pair_i", "pair_j", "sums"):
            arr = np.array(getattr(self, name), dtype=np.float64 if name == "sums" else np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.pair_i) == len(self.pair_j) == len(self.sums)):
            raise ValueError("pair index and sum arrays differ in length")
        if len(self.pair_i) and not np.all(self.pair_i < self.pair_j):
            raise ValueError("every pair must satisfy i < j")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(k) for k in range(self.n)))

    def __len__(self) -> int:
        return len(self.sums)

    @property
    def complete(self) -> bool:
        return len(self.sums) == self.n * (self.n - 1) // 2

    def entries(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(s)) for i, j, s in zip(self.pair_i, self.pair_j, self.sums)]

    @classmethod
    def from_matrix(cls, y, labels: Sequence[str] = (), stat: str = "") -> "PairedOutcomeSet":
        """Pair a complete ``n x n`` matrix of ordered outcomes (row = home team)."""
        y = np.ascontiguousarray(y, dtype=np.float64)
        if y.ndim != 2 or y.shape[0] != y.shape[1]:
            raise ValueError("outcome matrix must be square")
        pi, pj, s = kernels.pair_sums(y)
        return cls(y.shape[0], pi, pj, s, tuple(labels), stat)


def _parse_float(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"row {row}: column {column!r}: non-numeric value {cell!r}", row=row) from None
    if not math.isfinite(value):
        raise ParseError(f"row {row}: column {column!r}: non-finite value {cell!r}", row=row)
    return value


def _strip_comments(raw: str) -> str:
    lines = raw.splitlines(keepends=True)
    k = 0
    while k < len(lines) and (lines[k].startswith("#") or not lines[k].strip()):
        k += 1
    return "".join(lines[k:])


def infer_schema(header: Sequence[str]) -> list[str]:
    """Statistic names with both ``<stat>_home`` and ``<stat>_away`` columns, in header order."""
    cols = set(header)
    out = []
    for col in header:
        if col.endswith("_home") and col not in (HOME_COL, AWAY_COL):
            stat = col[: -len("_home")]
            if f"{stat}_away" in cols:
                out.append(stat)
    return out


def parse_matches(raw: str, schema: Sequence[str] | None = None) -> MatchSet:
    """Parse fixture rows into a :class:`MatchSet`.

    With ``schema=None`` every ``<stat>_home``/``<stat>_away`` column pair in the
    header is read.  Rows are numbered from 1, header excluded.
    """
    reader = csv.reader(io.StringIO(_strip_comments(raw)))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("empty input: header row is mandatory") from None

    stats = list(infer_schema(header) if schema is None else schema)
    required = [HOME_COL, AWAY_COL]
    for stat in stats:
        required += [f"{stat}_home", f"{stat}_away"]
    position = {name: k for k, name in enumerate(header)}
    for col in required:
        if col not in position:
            raise SchemaError(f"missing column {col!r}")
    if not stats:
        raise SchemaError("no statistic columns (<stat>_home, <stat>_away) found")

    rows = []
    seen: dict[tuple[str, str], int] = {}
    for rownum, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise ParseError(f"row {rownum}: expected {len(header)} cells, got {len(cells)}", row=rownum)
        home = cells[position[HOME_COL]]
        away = cells[position[AWAY_COL]]
        if not home or not away:
            raise ParseError(f"row {rownum}: empty team label", row=rownum)
        if home == away:
            raise ParseError(f"row {rownum}: team {home!r} cannot play itself", row=rownum)
        if (home, away) in seen:
            raise DuplicateFixtureError(home, away, rownum)
        seen[(home, away)] = rownum
        values = {}
        for stat in stats:
            hv = _parse_float(cells[position[f"{stat}_home"]], rownum, f"{stat}_home")
            av = _parse_float(cells[position[f"{stat}_away"]], rownum, f"{stat}_away")
            values[stat] = (hv, av)
        rows.append((home, away, values))

    labels = sorted({h for h, _, _ in rows} | {a for _, a, _ in rows})
    teams = tuple(TeamId(k, label) for k, label in enumerate(labels))
    by_label = {t.label: t for t in teams}
    matches = tuple(MatchRecord(by_label[h], by_label[a], v) for h, a, v in rows)
    return MatchSet(teams, matches, tuple(stats))


def read_matches(path, schema: Sequence[str] | None = None) -> MatchSet:
    return parse_matches(Path(path).read_text(encoding="utf-8"), schema)


def serialize_matches(matches: MatchSet) -> str:
    """Inverse of :func:`parse_matches`; floats are written with ``repr`` so values round-trip."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = [HOME_COL, AWAY_COL]
    for stat in matches.stat_names:
        header += [f"{stat}_home", f"{stat}_away"]
    writer.writerow(header)
    for m in matches.matches:
        row = [m.home.label, m.away.label]
        for stat in matches.stat_names:
            hv, av = m.stats[stat]
            row += [repr(float(hv)), repr(float(av))]
        writer.writerow(row)
    return buf.getvalue()


def net_outcome(match: MatchRecord, stat: str) -> NetOutcome:
    home_value, away_value = match.value(stat)
    return NetOutcome(match.home, match.away, home_value - away_value)


def outcome_matrix(matches: MatchSet, stat: str) -> np.ndarray:
    """``n x n`` matrix of net outcomes, row = home team; NaN where no fixture exists."""
    matches.check_stat(stat)
    y = np.full((matches.n, matches.n), np.nan)
    for m in matches.matches:
        y[m.home.index, m.away.index] = net_outcome(m, stat).value
    return y


def pair_outcomes(matches: MatchSet, stat: str, partial: bool = False) -> PairedOutcomeSet:
    """Sum each fixture with its mirror.

    Strict mode raises :class:`IncompleteSeasonError` if any unordered pair lacks
    either fixture.  In partial mode those pairs are dropped and listed in
    ``PairedOutcomeSet.dropped``.
    """
    y = outcome_matrix(matches, stat)
    pi, pj, s = kernels.pair_sums(y)
    observed = ~np.isnan(s)
    labels = tuple(matches.labels)
    if not observed.all():
        missing = [(int(i), int(j)) for i, j in zip(pi[~observed], pj[~observed])]
        if not partial:
            raise IncompleteSeasonError([(labels[i], labels[j]) for i, j in missing])
        return PairedOutcomeSet(
            matches.n, pi[observed], pj[observed], s[observed], labels, stat, tuple(missing)
        )
    return PairedOutcomeSet(matches.n, pi, pj, s, labels, stat)


@dataclass(frozen=True)
class StatSummary:
    stat: str
    mean_home: float
    mean_away: float
    overall_sd: float


def summarize_stat(matches: MatchSet, stat: str) -> StatSummary:
    """Home mean, away mean, and sample SD (ddof=1) over all home and away side values."""
    matches.check_stat(stat)
    if not matches.matches:
        raise ValueError("no matches to summarize")
    values = np.array([m.stats[stat] for m in matches.matches], dtype=np.float64)
    pooled = values.ravel()
    sd = float(np.std(pooled, ddof=1)) if pooled.size > 1 else 0.0
    return StatSummary(stat, float(values[:, 0].mean()), float(values[:, 1].mean()), sd)


def home_away_differences(matches: MatchSet, stat: str) -> list[tuple[str, str, float]]:
    """Per team and opponent: the team's own value at home minus its value away.

    Only opponents with both fixtures present contribute.  Rows are ordered by
    team index, then opponent index.
    """
    matches.check_stat(stat)
    rows = []
    for team in matches.teams:
        for opp in matches.teams:
            if opp.index == team.index:
                continue
            at_home = matches.fixture(team.index, opp.index)
            away = matches.fixture(opp.index, team.index)
            if at_home is None or away is None:
                continue
            rows.append((team.label, opp.label, at_home.stats[stat][0] - away.stats[stat][1]))
    return rows
