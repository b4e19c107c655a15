import csv
import io
import json

import numpy as np
import pytest

from homefield.cli import main
from homefield.fixture import bundled_fixture_path, generate_fixture, read_metadata
from homefield.league_data import parse_matches
from homefield.report import build_bundle, league_rows, plot_rows, team_rows, to_json


@pytest.fixture
def fixture_file(tmp_path, fixture_text):
    path = tmp_path / "league.csv"
    path.write_text(fixture_text, encoding="utf-8")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_all_json_cardinality(capsys, fixture_file):
    code, out, _ = run(capsys, "estimate", "--input", fixture_file, "--stat", "all", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["league"]) == 11
    assert len(doc["teams"]) == 220
    meta = doc["metadata"]
    assert meta["seed"] == 2021 and meta["alpha"] == 0.05 and meta["variance_mode"] == "total"
    assert len(meta["input_sha256"]) == 64


def test_estimate_deterministic(capsys, fixture_file):
    outs = [run(capsys, "estimate", "--input", fixture_file, "--format", fmt)[1] for fmt in ("json", "json", "csv", "csv")]
    assert outs[0] == outs[1]
    assert outs[2] == outs[3]


def test_json_roundtrip_exact(fixture_matches):
    bundle = build_bundle(fixture_matches, fixture_matches.stat_names)
    doc = json.loads(to_json(bundle))
    assert doc["league"] == league_rows(bundle)
    assert doc["teams"] == team_rows(bundle)


def test_csv_layout(capsys, fixture_file):
    code, out, _ = run(capsys, "estimate", "--input", fixture_file, "--stat", "yellow_cards", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["level"] for r in rows] == ["league"] + ["team"] * 20
    # row ordering: statistic, then team index
    assert [r["team"] for r in rows[1:]] == sorted(r["team"] for r in rows[1:])


def test_fixture_league_coverage(fixture_text, fixture_matches):
    # the league effect is the realized mean of the 20 team effects; each
    # interval is a 95% procedure, so at most 2 of 11 misses is a binomial
    # bound with ~1.6% false-failure probability
    meta = read_metadata(fixture_text)
    bundle = build_bundle(fixture_matches, fixture_matches.stat_names)
    covered = [
        row["ci_lower"] <= meta["stats"][row["statistic"]]["league_mean_beta"] <= row["ci_upper"]
        for row in league_rows(bundle)
    ]
    assert sum(covered) >= 9


def test_bundled_fixture_matches_generator(fixture_text):
    assert generate_fixture(2021)[0] == fixture_text
    assert bundled_fixture_path().name == "epl_synthetic.csv"


def test_table_output(capsys, fixture_file):
    code, out, _ = run(capsys, "estimate", "--input", fixture_file, "--stat", "expected_goals,yellow_cards")
    assert code == 0
    assert out.splitlines()[0].split() == ["Statistic", "Delta_hat", "sigma_hat", "P-value"]
    assert "[yellow_cards]" in out


def test_report_command(capsys, fixture_file):
    code, out, _ = run(capsys, "report", "--input", fixture_file)
    assert code == 0
    assert "Mean Home" in out and "Delta_hat" in out
    code, out, _ = run(capsys, "report", "--input", fixture_file, "--format", "json")
    doc = json.loads(out)
    assert len(doc["summary"]) == 11 and len(doc["league"]) == 11


def test_plotdata_kinds(capsys, fixture_file, tmp_path):
    out_path = tmp_path / "ci.csv"
    assert run(capsys, "plotdata", "--input", fixture_file, "--kind", "team_ci", "--output", out_path)[0] == 0
    rows = list(csv.DictReader(out_path.open()))
    assert len(rows) == 220
    assert list(rows[0]) == ["statistic", "team", "beta_hat", "ci_lower", "ci_upper"]

    code, out, _ = run(capsys, "plotdata", "--input", fixture_file, "--kind", "pvalue_scatter")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == 220

    code, out, _ = run(capsys, "plotdata", "--input", fixture_file, "--kind", "net_diff_box", "--stat", "yellow_cards")
    rows = list(csv.DictReader(io.StringIO(out)))
    counts = {}
    for r in rows:
        counts[r["team"]] = counts.get(r["team"], 0) + 1
    assert len(counts) == 20 and set(counts.values()) == {19}


def test_plot_rows_unknown_kind(fixture_matches):
    with pytest.raises(ValueError):
        plot_rows("violin", matches=fixture_matches)


def test_null_fixture_pvalue_calibration():
    # generator with every team effect exactly zero
    pvals = []
    for seed in range(1, 6):
        text, _ = generate_fixture(seed, null=True)
        ms = parse_matches(text)
        pvals += [r["p_value"] for r in plot_rows("pvalue_scatter", build_bundle(ms, ms.stat_names))]
    frac = np.mean(np.array(pvals) < 0.05)
    assert len(pvals) == 1100
    assert 0.02 <= frac <= 0.09


def test_simulate_single_cell(capsys):
    code, out, _ = run(capsys, "simulate", "--scenario", "1", "--teams", "10", "--sigma0-sq", "1", "--reps", "20",
                       "--seed", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert {"bias", "cp", "sv", "mv"} <= set(rows[0])


def test_simulate_grid_small_deterministic(capsys, tmp_path):
    args = ("simulate", "--grid", "table2", "--seed", "7", "--reps", "2", "--format", "json")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert len(json.loads(out1)["rows"]) == 24


# --- exit-code taxonomy -----------------------------------------------------


def test_help_documents_exit_codes(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for n in ("2", "3", "4", "5", "6"):
        assert f"  {n}  " in out


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate"],
        ["estimate", "--input", "x.csv", "--format", "xml"],
        ["simulate", "--teams", "10"],
        ["simulate", "--scenario", "1", "--teams", "2", "--sigma0-sq", "1", "--reps", "5"],
        ["simulate", "--scenario", "1", "--teams", "5", "--sigma0-sq", "-1", "--reps", "5"],
        ["simulate", "--scenario", "1", "--teams", "5", "--sigma0-sq", "1", "--reps", "1"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_usage_errors_with_input(capsys, fixture_file):
    assert run(capsys, "estimate", "--input", fixture_file, "--alpha", "1.5")[0] == 2
    assert run(capsys, "plotdata", "--input", fixture_file, "--kind", "team_ci", "--standardize")[0] == 2


def test_io_errors(capsys, tmp_path, fixture_file):
    code, _, err = run(capsys, "estimate", "--input", tmp_path / "missing.csv")
    assert code == 3 and "I/O error" in err
    code, _, _ = run(capsys, "estimate", "--input", fixture_file, "--output", tmp_path / "no" / "dir" / "out.txt")
    assert code == 3


@pytest.mark.parametrize(
    "content, code",
    [
        ("home_team,away_team,x_home\nA,B,1\n", 4),
        ("home_team,away_team,x_home,x_away\nA,B,1,z\n", 4),
        ("home_team,away_team,x_home,x_away\nA,B,1,2\nA,B,1,2\n", 4),
        ("home_team,away_team,x_home,x_away\nA,B,1,2\nB,A,1,2\nA,C,1,2\nC,A,1,2\nB,C,1,2\n", 5),
        ("home_team,away_team,x_home,x_away\nA,B,1,2\nB,A,1,2\n", 6),
    ],
)
def test_data_error_codes(capsys, tmp_path, content, code):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    got, _, err = run(capsys, "estimate", "--input", path)
    assert got == code
    assert err.count("\n") == 1


def test_unknown_stat_code(capsys, fixture_file):
    assert run(capsys, "estimate", "--input", fixture_file, "--stat", "corners")[0] == 4


def test_partial_mode_and_rank_error(capsys, tmp_path):
    # four teams, B-A fixture missing: strict fails, partial drops the pair
    rows = ["home_team,away_team,x_home,x_away"]
    teams = "ABCD"
    for h in teams:
        for a in teams:
            if h != a and (h, a) != ("B", "A"):
                rows.append(f"{h},{a},{ord(h) % 5},{ord(a) % 3}")
    path = tmp_path / "partial.csv"
    path.write_text("\n".join(rows) + "\n")
    assert run(capsys, "estimate", "--input", path)[0] == 5
    code, out, _ = run(capsys, "estimate", "--input", path, "--partial", "--format", "json")
    assert code == 0
    assert json.loads(out)["league"][0]["dropped_pairs"] == 1

    # only a 4-cycle of pairs survives: bipartite, not identified
    keep = {("A", "B"), ("B", "C"), ("C", "D"), ("A", "D")}
    rows = ["home_team,away_team,x_home,x_away"]
    for h, a in sorted(keep):
        rows += [f"{h},{a},1,0", f"{a},{h},0,1"]
    rows += ["A,C,1,0"]
    path.write_text("\n".join(rows) + "\n")
    assert run(capsys, "estimate", "--input", path, "--partial")[0] == 6
