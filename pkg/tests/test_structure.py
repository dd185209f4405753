from itertools import product

import networkx as nx
import pytest
from conftest import random_graph

from turan_lab.core.errors import CapacityError, LabArgumentError, PreconditionError, RecordMismatchError
from turan_lab.core.families import clique, complete_multipartite, cycle, turan
from turan_lab.core.graph import Graph, PartitionVec, VertexSet
from turan_lab.extremal.enumeration import extremal_record
from turan_lab.extremal.structure import (
    c2_constant,
    c2_window,
    decompose,
    furedi_subgraph,
    intersection_bound_check,
    min_internal_partition,
    partitions_within,
    stability_chain,
)


def test_turan_graph_has_a_unique_perfect_partition(t3_6, settings):
    optimum = min_internal_partition(t3_6, 3, settings=settings)
    assert optimum.internal_edges == 0
    assert optimum.unique
    assert optimum.partition.sizes == (2, 2, 2)
    assert optimum.method == "exhaustive"


def test_five_cycle_cut(c5, settings):
    optimum = min_internal_partition(c5, 2, settings=settings)
    assert optimum.internal_edges == 1
    assert optimum.minimizers == 5


def test_branch_and_bound_agrees_with_exhaustive(rng, settings):
    g = random_graph(11, 0.5, rng)
    exhaustive = min_internal_partition(g, 3, settings=settings)
    bounded = min_internal_partition(g, 3, settings=settings.model_copy(update={"exhaustive_partition_cap": 5}))
    assert bounded.method == "branch-and-bound"
    assert bounded.internal_edges == exhaustive.internal_edges
    assert bounded.minimizers == exhaustive.minimizers


def _all_assignments(g: Graph, r: int) -> tuple[int, set[tuple[int, ...]]]:
    """Minimum internal edge count over all r^n labelings and its minimizers up to relabeling."""
    edges = list(g.edges())
    best, minimizers = None, set()
    for labels in product(range(r), repeat=g.n):
        cost = sum(1 for u, v in edges if labels[u] == labels[v])
        first_seen: dict[int, int] = {}
        canonical = tuple(first_seen.setdefault(c, len(first_seen)) for c in labels)
        if best is None or cost < best:
            best, minimizers = cost, {canonical}
        elif cost == best:
            minimizers.add(canonical)
    return best, minimizers


@pytest.mark.parametrize(("n", "r"), [(4, 2), (6, 2), (7, 3), (8, 2), (8, 3), (9, 3), (10, 2)])
def test_partition_search_matches_every_labeling(n, r, rng, settings):
    bounded = settings.model_copy(update={"exhaustive_partition_cap": 3})
    for _ in range(3):
        g = random_graph(n, float(rng.uniform(0.3, 0.8)), rng)
        best, minimizers = _all_assignments(g, r)
        for mode in (settings, bounded):
            optimum = min_internal_partition(g, r, settings=mode)
            assert optimum.internal_edges == best
            assert optimum.minimizers == len(minimizers)
            assert optimum.partition.assignment in minimizers


def test_partition_arguments(settings):
    with pytest.raises(LabArgumentError):
        min_internal_partition(cycle(5), 1, settings=settings)
    with pytest.raises(CapacityError):
        min_internal_partition(Graph.empty(21), 2, settings=settings)


def test_partitions_within_counts_relabeled_classes(c5):
    assert partitions_within(c5, 2, 0, 10) == 0
    assert partitions_within(c5, 2, 1, 10) == 5
    with pytest.raises(CapacityError):
        partitions_within(Graph.empty(12), 2, 0, 10)


def test_decomposition_of_turan_graph(t3_6, settings):
    report = decompose(t3_6, PartitionVec((0, 0, 1, 1, 2, 2), 3), 0, settings=settings)
    assert report.all_passed
    assert report.e_in == report.e_out == 0
    assert report.a_sets == [[], [], []]
    assert report.balance_gap == 0
    assert report.q == pytest.approx(8.0)
    assert report.c0_partitions == 1


def test_decomposition_with_inside_and_missing_edges(settings):
    g = turan(2, 6).add_edge(0, 1).remove_edge(0, 3)
    p = PartitionVec((0, 0, 0, 1, 1, 1), 2)
    report = decompose(g, p, 1, settings=settings)
    assert report.e_in == 1 and report.e_out == 1
    assert report.a_sets[0] == [0, 1]
    assert report.max_out_degree == 1
    names = {c.name: c for c in report.checks}
    assert names["class_internal"].passed
    assert names["in_minus_out"].lhs == 0
    assert not names["b_joined"].passed
    assert report.b_sets == [[2], [3, 4, 5]]


def test_decomposition_arguments(t3_6, settings):
    with pytest.raises(LabArgumentError):
        decompose(t3_6, PartitionVec((0, 1), 2), 0, settings=settings)
    with pytest.raises(LabArgumentError):
        decompose(t3_6, PartitionVec((0, 0, 1, 1, 2, 2), 3), -1, settings=settings)


def test_furedi_subgraph_keeps_enough_cross_edges(rng, settings):
    for _ in range(10):
        g = random_graph(8, 0.4, rng)
        if any(len(c) >= 4 for c in nx.find_cliques(g.to_networkx())):
            continue
        result = furedi_subgraph(g, 3, settings=settings)
        assert result.bound_ok
        assert result.h0.num_edges >= g.num_edges - result.t
    with pytest.raises(PreconditionError):
        furedi_subgraph(clique(4), 3, settings=settings)


def test_intersection_bound():
    sets = [VertexSet.of(8, [0, 1, 2, 3, 4]), VertexSet.of(8, [2, 3, 4, 5]), VertexSet.of(8, [3, 4, 6])]
    assert intersection_bound_check(sets)
    with pytest.raises(LabArgumentError):
        intersection_bound_check([])


def test_c2_constant_divides():
    for n, r, c0 in [(30, 3, 0), (31, 3, 1), (40, 4, 2)]:
        c2 = c2_constant(n, r, c0)
        assert (n + c2) % r == 0
        low, high = c2_window(n, r, c2)
        assert low < n / r <= high
    with pytest.raises(LabArgumentError):
        c2_constant(10, 1, 0)


def test_stability_chain_on_turan_graph(k4, settings):
    record = extremal_record(6, k4, settings=settings)
    report = stability_chain(turan(3, 6), k4, record, settings=settings)
    findings = report.stability
    assert findings.balanced
    assert findings.edges_equal_ex and findings.in_ex
    assert findings.perron_min == pytest.approx(1.0)
    assert findings.turan_perron_min == pytest.approx(1.0)
    assert findings.saturated is True


def test_stability_chain_rejects_foreign_graphs(k3, k4, settings):
    record = extremal_record(6, k4, settings=settings)
    with pytest.raises(RecordMismatchError):
        stability_chain(turan(3, 7), k4, record, settings=settings)
    with pytest.raises(RecordMismatchError):
        stability_chain(turan(3, 6), k3, record, settings=settings)
    with pytest.raises(RecordMismatchError):
        stability_chain(complete_multipartite((3, 3)), k4, record, settings=settings)
