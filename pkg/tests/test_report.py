import csv
import io
import json

import pytest

from turan_lab.core.errors import ConfigError
from turan_lab.suites.renderer import ReportRenderer
from turan_lab.suites.report import CheckKind, ExperimentConfig, LabReport, write_report


@pytest.fixture
def report() -> LabReport:
    report = LabReport(command="extremal", config={"forbid": "clique:3"})
    report.require("turan_theorem", "Ex = {T_r(n)}", True, margin=0.5, n=5)
    report.observe("record", "exact ex and ex_ssp", graphs=["Dx{"], ex=6)
    report.add_graph("turan", "Dx{")
    return report


def test_assert_and_observe_rows(report):
    assert report.summary() == {"pass": 1, "fail": 0, "observe": 1}
    assert report.exit_code == 0
    observed = report.checks[1]
    assert observed.kind is CheckKind.OBSERVE
    assert observed.passed is None
    assert observed.status == "observe"


def test_failures_and_errors_set_the_exit_code(report):
    report.require("containment", "Ex_ssp within Ex", False, n=7)
    assert [c.name for c in report.failures] == ["containment"]
    assert report.exit_code == 1

    clean = LabReport(command="verify-lemmas", config={})
    clean.error = "budget exhausted"
    assert clean.exit_code == 1


def test_dict_round_trip(report):
    again = LabReport.from_dict(json.loads(json.dumps(report.finish().to_dict())))
    assert again.checks == report.checks
    assert again.artifacts == report.artifacts
    assert again.duration_s == report.duration_s


def test_csv_rows(report):
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert [r["name"] for r in rows] == ["turan_theorem", "record"]
    assert rows[0]["status"] == "pass"
    assert json.loads(rows[0]["values"]) == {"n": 5}
    assert rows[1]["margin"] == ""
    assert rows[1]["graphs"] == "Dx{"


def test_graph6_lines_deduplicate_labels(report):
    assert report.graph6_lines() == "Dx{ record#0\nDx{ turan\n"


def test_config_validation():
    config = ExperimentConfig.build(command="extremal", forbid="clique:3", n_values=[4, 5])
    assert config.echo()["n_values"] == [4, 5]
    assert config.model_fields_set == {"command", "forbid", "n_values"}
    for bad in [{"n_values": [70]}, {"n_values": [0]}, {"eps": 0.0}, {"workers": 0}, {"tol": -1.0}]:
        with pytest.raises(ConfigError):
            ExperimentConfig.build(command="extremal", **bad)


async def test_write_report(report, tmp_path):
    markdown = ReportRenderer().render_markdown(report)
    paths = await write_report(report, tmp_path / "out", markdown)
    assert set(paths) == {"json", "csv", "g6", "md"}
    assert all(p.exists() for p in paths.values())
    assert json.loads(paths["json"].read_text())["summary"]["pass"] == 1
    assert paths["json"].name.startswith("extremal_")


def test_markdown_rendering(report):
    report.require("rayleigh_floor", "q >= 4e/n", False, margin=-0.25)
    report.error = "stopped"
    text = ReportRenderer().render_markdown(report)
    assert text.startswith("# extremal report")
    assert "**FAIL**" in text
    assert "| turan_theorem | assert | pass |" in text
    assert "## Failing instances" in text
    assert "Stopped early: `stopped`" in text
    assert "- turan: `Dx{`" in text
