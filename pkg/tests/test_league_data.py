import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homefield.errors import (
    DuplicateFixtureError,
    IncompleteSeasonError,
    ParseError,
    SchemaError,
    UnknownStatisticError,
)
from homefield.league_data import (
    PairedOutcomeSet,
    home_away_differences,
    net_outcome,
    pair_outcomes,
    parse_matches,
    serialize_matches,
    summarize_stat,
)

from conftest import matrix_to_csv


def test_parse_smallest_double_round_robin(three_team_csv):
    ms = parse_matches(three_team_csv, ["x"])
    assert ms.n == 3
    assert len(ms.matches) == 6
    assert ms.labels == ["A", "B", "C"]


def test_parse_bundled_fixture_shape(fixture_matches):
    assert fixture_matches.n == 20
    assert len(fixture_matches.matches) == 380
    assert len(fixture_matches.stat_names) == 11


def test_team_index_is_lexicographic():
    ms = parse_matches("home_team,away_team,x_home,x_away\nzeta,alpha,1,2\nalpha,zeta,3,4\nmid,alpha,0,0\n")
    assert [(t.index, t.label) for t in ms.teams] == [(0, "alpha"), (1, "mid"), (2, "zeta")]


def test_duplicate_fixture_cites_row(three_team_csv):
    raw = three_team_csv + "B,A,9,9\n"
    with pytest.raises(DuplicateFixtureError) as exc:
        parse_matches(raw)
    assert exc.value.row == 7
    assert "row 7" in str(exc.value)


def test_missing_column_named():
    with pytest.raises(SchemaError, match="'x_away'"):
        parse_matches("home_team,away_team,x_home\nA,B,1\n", ["x"])
    with pytest.raises(SchemaError, match="'home_team'"):
        parse_matches("home,away_team,x_home,x_away\nA,B,1,2\n")


def test_non_numeric_cell_reports_row():
    raw = "home_team,away_team,x_home,x_away\nA,B,1,2\nB,A,one,2\n"
    with pytest.raises(ParseError) as exc:
        parse_matches(raw)
    assert exc.value.row == 2


def test_non_finite_and_self_play_rejected():
    with pytest.raises(ParseError):
        parse_matches("home_team,away_team,x_home,x_away\nA,B,nan,2\n")
    with pytest.raises(ParseError):
        parse_matches("home_team,away_team,x_home,x_away\nA,A,1,2\n")


def test_empty_input():
    with pytest.raises(SchemaError):
        parse_matches("")


def test_net_outcome_sign_convention():
    ms = parse_matches("home_team,away_team,x_home,x_away\nA,B,5,7\nB,A,7,5\nC,A,3,1\nD,A,1.2,1.2\n")
    ab, ba, ca, da = ms.matches
    assert net_outcome(ab, "x").value == -2
    assert net_outcome(ba, "x").value == 2
    assert net_outcome(ca, "x").value == 2
    assert net_outcome(da, "x").value == 0
    with pytest.raises(UnknownStatisticError):
        net_outcome(ab, "y")


def test_pair_outcomes_three_teams(three_team_csv):
    pairs = pair_outcomes(parse_matches(three_team_csv), "x")
    # 0-based version of [(1,2,3),(1,3,2),(2,3,4)]
    assert pairs.entries() == [(0, 1, 3.0), (0, 2, 2.0), (1, 2, 4.0)]
    assert pairs.complete


def test_pair_count_full_season(fixture_matches):
    assert len(pair_outcomes(fixture_matches, "expected_goals")) == 190


def test_strict_mode_names_missing_pair(three_team_csv):
    raw = "\n".join(line for line in three_team_csv.splitlines() if not line.startswith("B,A")) + "\n"
    ms = parse_matches(raw)
    with pytest.raises(IncompleteSeasonError) as exc:
        pair_outcomes(ms, "x")
    assert exc.value.missing == [("A", "B")]
    assert "{A,B}" in str(exc.value)
    partial = pair_outcomes(ms, "x", partial=True)
    assert partial.dropped == ((0, 1),)
    assert partial.entries() == [(0, 2, 2.0), (1, 2, 4.0)]


def test_pairs_are_read_only(three_team_csv):
    pairs = pair_outcomes(parse_matches(three_team_csv), "x")
    with pytest.raises(ValueError):
        pairs.sums[0] = 1.0


def test_unknown_stat(fixture_matches):
    with pytest.raises(UnknownStatisticError):
        pair_outcomes(fixture_matches, "corners")
    with pytest.raises(UnknownStatisticError):
        summarize_stat(fixture_matches, "corners")


def test_summarize_constant():
    ms = parse_matches("home_team,away_team,x_home,x_away\nA,B,5,5\nB,A,5,5\n")
    s = summarize_stat(ms, "x")
    assert (s.mean_home, s.mean_away, s.overall_sd) == (5.0, 5.0, 0.0)


def test_summarize_matches_single_pass_oracle(fixture_text, fixture_matches):
    # independent accumulation straight from the CSV lines
    lines = [ln for ln in fixture_text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    h, a = header.index("touches_in_box_home"), header.index("touches_in_box_away")
    count = s_h = s_a = s_all = s_sq = 0.0
    for ln in lines[1:]:
        cells = ln.split(",")
        vh, va = float(cells[h]), float(cells[a])
        count += 1
        s_h += vh
        s_a += va
        s_all += vh + va
        s_sq += vh * vh + va * va
    m = 2 * count
    sd = ((s_sq - s_all * s_all / m) / (m - 1)) ** 0.5
    got = summarize_stat(fixture_matches, "touches_in_box")
    assert got.mean_home == pytest.approx(s_h / count, rel=1e-12)
    assert got.mean_away == pytest.approx(s_a / count, rel=1e-12)
    assert got.overall_sd == pytest.approx(sd, rel=1e-9)


def test_home_away_differences(fixture_matches):
    rows = home_away_differences(fixture_matches, "yellow_cards")
    assert len(rows) == 20 * 19
    by_team = {}
    for team, _, _ in rows:
        by_team[team] = by_team.get(team, 0) + 1
    assert set(by_team.values()) == {19}


def test_roundtrip_serialize(fixture_matches):
    again = parse_matches(serialize_matches(fixture_matches))
    assert again.labels == fixture_matches.labels
    for a, b in zip(again.matches, fixture_matches.matches):
        assert a.stats == b.stats
    for stat in fixture_matches.stat_names:
        np.testing.assert_array_equal(pair_outcomes(again, stat).sums, pair_outcomes(fixture_matches, stat).sums)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (5, 5), elements=finite), arrays(np.float64, (5, 5), elements=finite))
def test_antisymmetric_perturbation_cancels(y, a):
    anti = np.triu(a, 1) - np.triu(a, 1).T
    base = PairedOutcomeSet.from_matrix(y)
    shifted = PairedOutcomeSet.from_matrix(y + anti)
    # equal up to rounding of the perturbation itself
    np.testing.assert_allclose(base.sums, shifted.sums, atol=1e-9 * (1 + np.abs(a).max()))


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (6, 6), elements=finite), st.permutations(range(6)))
def test_relabeling_permutes_pairs(y, perm):
    perm = np.array(perm)
    base = {(i, j): s for i, j, s in PairedOutcomeSet.from_matrix(y).entries()}
    # team k becomes team perm[k]
    inv = np.argsort(perm)
    relabeled = PairedOutcomeSet.from_matrix(y[np.ix_(inv, inv)])
    for i, j, s in relabeled.entries():
        a, b = sorted((inv[i], inv[j]))
        assert s == base[(a, b)]


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (4, 4), elements=finite))
def test_csv_pairing_roundtrip(y):
    ms = parse_matches(matrix_to_csv(y))
    pairs = pair_outcomes(ms, "goals")
    again = pair_outcomes(parse_matches(serialize_matches(ms)), "goals")
    np.testing.assert_array_equal(pairs.sums, again.sums)
    np.testing.assert_array_equal(pairs.sums, PairedOutcomeSet.from_matrix(np.where(np.eye(4, dtype=bool), 0, y)).sums)
