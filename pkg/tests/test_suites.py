import pytest

from turan_lab.core.errors import ConfigError
from turan_lab.core.families import complete_multipartite
from turan_lab.core.graph6 import graph6_encode
from turan_lab.suites.extremal_suite import cmd_extremal, cmd_regularity, cmd_structure
from turan_lab.suites.fan_problem import cmd_fan_problem
from turan_lab.suites.lemma_suite import compositions, cmd_verify
from turan_lab.suites.report import ExperimentConfig


def _rows(report, name):
    return [c for c in report.checks if c.name == name]


def test_compositions_are_nonincreasing():
    parts = list(compositions(7, 3))
    assert parts == [(5, 1, 1), (4, 2, 1), (3, 3, 1), (3, 2, 2)]
    assert all(sum(p) == 7 for p in parts)
    assert list(compositions(2, 3)) == []


def test_verify_small_range(settings):
    config = ExperimentConfig.build(
        command="verify-lemmas", n_values=[6], seed=7, params={"instances": 20, "triples": 200}
    )
    report = cmd_verify(config, settings)
    assert report.error is None
    assert report.failures == []
    expected = {
        "closed_form_turan",
        "bipartite_identity",
        "quotient_radius",
        "perron_ratio",
        "left_perron",
        "balancing_increases_q",
        "turan_gap",
        "join_bound",
        "join_bound_order",
        "furedi_subgraph",
        "edge_monotonicity",
        "radius_sandwich",
        "rayleigh_identity",
        "intersection_bound",
        "turan_edge_window",
        "two_class_quotient",
        "turan_perron_min",
        "rayleigh_split",
    }
    asserted = {c.name for c in report.checks if c.kind.value == "assert"}
    assert expected <= asserted
    assert _rows(report, "join_bound")[0].values["instances"] == 20
    assert _rows(report, "intersection_bound")[0].values["instances"] == 200
    assert set(report.sections["timings"]) >= {"closed_form_turan", "supplements"}


def test_verify_is_reproducible_for_a_seed(settings):
    config = ExperimentConfig.build(
        command="verify-lemmas", n_values=[5], seed=3, params={"instances": 10, "triples": 50}
    )
    first = cmd_verify(config, settings)
    second = cmd_verify(config, settings)
    assert [c.margin for c in first.checks] == [c.margin for c in second.checks]


async def test_extremal_for_k4(settings, store):
    config = ExperimentConfig.build(command="extremal", forbid="family:clique:4", n_values=[4, 5, 6])
    report = await cmd_extremal(config, settings, store=store)
    assert report.error is None
    assert report.exit_code == 0
    assert [c.passed for c in _rows(report, "clique_spectral_extremal")] == [True] * 3
    assert [c.kind.value for c in _rows(report, "containment")] == ["assert"] * 3
    assert _rows(report, "c0_sequence")[0].values["window_sup"] == 0
    assert len(_rows(report, "density_hypotheses")) == 3
    assert not report.notes

    entries = await store.list_entries()
    assert sorted(e["n"] for e in entries) == [3, 4, 5, 6]


async def test_extremal_for_triangle(settings, store):
    config = ExperimentConfig.build(command="extremal", forbid="clique:3", n_values=[3, 4, 5])
    report = await cmd_extremal(config, settings, store=store)
    assert report.exit_code == 0
    assert [c.passed for c in _rows(report, "triangle_spectral_extremal")] == [True] * 3
    containment = _rows(report, "containment")
    assert [c.values["holds"] for c in containment] == [True, False, False]
    bound = _rows(report, "saturated_bound")
    assert [c.passed for c in bound] == [True] * 3
    assert bound[-1].values["saturated"] == 3
    assert (bound[-1].values["min_edges"], bound[-1].values["max_edges"]) == (4, 6)
    assert _rows(report, "record")[-1].values["saturated_count"] == 3
    assert report.notes


async def test_extremal_reports_budget_exhaustion(settings, store):
    tight = settings.model_copy(update={"enumeration_budget": 10})
    config = ExperimentConfig.build(command="extremal", forbid="clique:3", n_values=[6])
    report = await cmd_extremal(config, tight, store=store)
    assert report.error.startswith("BudgetExhaustedError")
    assert report.sections["budget_progress"]["order"] >= 1
    assert report.exit_code == 1


async def test_extremal_rejects_bad_forbid(settings, store):
    with pytest.raises(ConfigError):
        await cmd_extremal(ExperimentConfig.build(command="extremal", n_values=[4]), settings, store=store)
    with pytest.raises(ConfigError):
        config = ExperimentConfig.build(command="extremal", forbid="wheel:5", n_values=[4])
        await cmd_extremal(config, settings, store=store)


async def test_fan_problem_split_loses_to_turan(settings, store):
    config = ExperimentConfig.build(command="fan-problem", n_values=[12], params={"k": 1, "t": 4})
    report = await cmd_fan_problem(config, settings, store=store)
    assert report.exit_code == 0
    comparison = _rows(report, "split_vs_turan")[0].values
    assert comparison["q_turan"] == pytest.approx(16.0)
    assert comparison["q_split"] == pytest.approx(13.7082039, abs=1e-6)
    assert comparison["larger"] == "turan"
    assert all(c.passed for c in _rows(report, "split_is_f_free") + _rows(report, "turan_is_f_free"))


async def test_fan_problem_with_enumeration(settings, store):
    config = ExperimentConfig.build(command="fan-problem", n_values=[5], params={"k": 1, "t": 3, "enumerate": True})
    report = await cmd_fan_problem(config, settings, store=store)
    assert report.exit_code == 0
    assert _rows(report, "split_vs_turan")[0].values["larger"] == "tie"
    truth = _rows(report, "true_ex_ssp")[0].values
    assert truth["ex_ssp"] == pytest.approx(5.0)
    assert truth["turan_attains"] and truth["split_attains"]


@pytest.mark.parametrize(
    ("params", "n_values"),
    [({"k": 1, "t": 2}, [10]), ({"k": 0, "t": 4}, [10]), ({"k": 5, "t": 4}, [10]), ({"k": 1, "t": 4}, [10, 12])],
)
async def test_fan_problem_configuration_errors(settings, store, params, n_values):
    config = ExperimentConfig.build(command="fan-problem", n_values=n_values, params=params)
    with pytest.raises(ConfigError):
        await cmd_fan_problem(config, settings, store=store)


async def test_structure_of_turan_graph(settings, store):
    config = ExperimentConfig.build(command="structure", params={"graph": "turan:3,6", "r": 3})
    report = await cmd_structure(config, settings, store=store)
    assert report.exit_code == 0
    optimum = _rows(report, "optimal_partition")[0].values
    assert optimum["internal_edges"] == 0 and optimum["unique"]
    assert all(c.values["holds"] for c in _rows(report, "class_internal"))
    assert _rows(report, "rayleigh_split")[0].passed


async def test_structure_stability_chain(settings, store):
    config = ExperimentConfig.build(command="structure", forbid="clique:4", params={"graph": "turan:3,6"})
    report = await cmd_structure(config, settings, store=store)
    assert report.exit_code == 0
    chain = _rows(report, "stability_chain")[0].values
    assert chain["balanced"] and chain["in_ex"]
    assert _rows(report, "turan_perron_floor")[0].passed


async def test_structure_reports_foreign_graph(settings, store):
    config = ExperimentConfig.build(command="structure", forbid="clique:4", params={"graph": "multipartite:3,3"})
    report = await cmd_structure(config, settings, store=store)
    assert report.error.startswith("RecordMismatchError")
    assert report.exit_code == 1


async def test_regularity_fixture(settings, tmp_path):
    graph_file = tmp_path / "k33.g6"
    classes_file = tmp_path / "k33.classes"
    graph_file.write_text(graph6_encode(complete_multipartite((3, 3))) + "\n")
    classes_file.write_text("0 1 2\n3 4 5\n")
    config = ExperimentConfig.build(
        command="regularity",
        eps=0.5,
        forbid="clique:2",
        params={"graph": str(graph_file), "classes": str(classes_file), "max_parts": 3},
    )
    report = await cmd_regularity(config, settings)
    assert report.exit_code == 0
    assert _rows(report, "pair_regularity")[0].values["regular"]
    assert _rows(report, "partition_irregularity")[0].values["irregularity"] == 0.0
    assert _rows(report, "regular_partition_search")[0].values["partition"] is not None
    premise = _rows(report, "counting_lemma")[0]
    assert premise.passed
    assert premise.values["embedding"] is not None
