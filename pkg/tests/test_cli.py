import json

import pytest
from typer.testing import CliRunner

from turan_lab.__about__ import __version__
from turan_lab.cli import app

runner = CliRunner()


@pytest.fixture
def dirs(tmp_path):
    return ["--cache", str(tmp_path / "cache"), "--out", str(tmp_path / "out")]


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.stdout


def test_extremal_writes_reports(dirs, tmp_path):
    result = runner.invoke(app, ["extremal", "--forbid", "family:clique:3", "--n", "3..5", *dirs])
    assert result.exit_code == 0, result.output
    assert "extremal finished" in result.stdout
    reports = list((tmp_path / "out").glob("extremal_*.json"))
    assert len(reports) == 1
    data = json.loads(reports[0].read_text())
    assert data["exit_code"] == 0
    assert data["config"]["n_values"] == [3, 4, 5]
    assert {p.suffix for p in (tmp_path / "out").iterdir()} == {".json", ".csv", ".g6", ".md"}



def test_extremal_eps_reaches_min_degree_rows(dirs, tmp_path):
    result = runner.invoke(app, ["extremal", "--forbid", "clique:3", "--n", "4,5", "--eps", "0.2", *dirs])
    assert result.exit_code == 0, result.output
    data = json.loads(next((tmp_path / "out").glob("extremal_*.json")).read_text())
    rows = [c for c in data["checks"] if c["name"] == "min_degree_class"]
    assert [row["values"]["eps"] for row in rows] == [0.2, 0.2]


@pytest.mark.parametrize("n", ["9..4", "x", "70", "0..4", "0"])
def test_invalid_n_exits_with_two(dirs, n):
    result = runner.invoke(app, ["extremal", "--forbid", "clique:3", "--n", n, *dirs])
    assert result.exit_code == 2


def test_unknown_family_exits_with_two(dirs):
    result = runner.invoke(app, ["extremal", "--forbid", "wheel:5", "--n", "4", *dirs])
    assert result.exit_code == 2


def test_budget_exhaustion_exits_with_one(dirs, tmp_path):
    result = runner.invoke(app, ["extremal", "--forbid", "clique:3", "--n", "6", "--budget", "10", *dirs])
    assert result.exit_code == 1
    data = json.loads(next((tmp_path / "out").glob("extremal_*.json")).read_text())
    assert data["error"].startswith("BudgetExhaustedError")


def test_records_list_show_clear(dirs, tmp_path):
    cache = ["--cache", str(tmp_path / "cache")]
    runner.invoke(app, ["extremal", "--forbid", "clique:3", "--n", "4", *dirs])

    listed = runner.invoke(app, ["records", "list", *cache])
    assert listed.exit_code == 0
    assert "2 record(s)" in listed.stdout

    shown = runner.invoke(app, ["records", "show", "--forbid", "clique:3", "--n", "4", *cache])
    assert shown.exit_code == 0
    assert json.loads(shown.stdout)["ex"] == 4

    missing = runner.invoke(app, ["records", "show", "--forbid", "clique:3", "--n", "9", *cache])
    assert missing.exit_code == 1

    aborted = runner.invoke(app, ["records", "clear", *cache], input="n\n")
    assert aborted.exit_code == 1
    cleared = runner.invoke(app, ["records", "clear", "--yes", *cache])
    assert cleared.exit_code == 0
    assert "removed 2 record(s)" in cleared.stdout


def test_fan_problem_command(dirs):
    result = runner.invoke(app, ["fan-problem", "--k", "1", "--t", "4", "--n", "12", *dirs])
    assert result.exit_code == 0, result.output


def test_fan_problem_rejects_small_t(dirs):
    result = runner.invoke(app, ["fan-problem", "--k", "1", "--t", "2", "--n", "12", *dirs])
    assert result.exit_code == 2


def test_structure_needs_r_or_forbid(dirs):
    result = runner.invoke(app, ["structure", "--graph", "turan:3,6", *dirs])
    assert result.exit_code == 2
    result = runner.invoke(app, ["structure", "--graph", "turan:3,6", "--r", "3", *dirs])
    assert result.exit_code == 0, result.output


def test_verify_lemmas_small(tmp_path):
    result = runner.invoke(
        app,
        ["verify-lemmas", "--n", "5", "--seed", "1", "--instances", "5", "--triples", "20", "--out", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
