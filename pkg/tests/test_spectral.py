import math

import networkx as nx
import numpy as np
import pytest
from conftest import random_graph

from turan_lab.core.errors import LabArgumentError
from turan_lab.core.families import complete_multipartite, complete_split, turan
from turan_lab.core.graph import Graph, PartitionVec, disjoint_union
from turan_lab.core.spectral import (
    a_radius,
    balancing_gap_bound,
    cai_fan_turan_q,
    complete_split_q,
    eigencomponent_ratio,
    is_spectral_tie,
    join_bound_terms,
    q_radius,
    quotient_left_perron,
    quotient_multipartite,
    rayleigh_q,
    rayleigh_split,
    signless_laplacian,
    spectral_upper_estimate,
    turan_edges,
    turan_perron_min,
    turan_q_lower_estimate,
    turan_sizes,
    two_class_quotient_q,
    two_class_quotient_upper,
)


def test_complete_graph_radii():
    for n in range(2, 10):
        g = Graph.complete(n)
        assert q_radius(g).radius == pytest.approx(2 * (n - 1), abs=1e-9)
        assert a_radius(g).radius == pytest.approx(n - 1, abs=1e-9)


def test_single_vertex_and_empty_graphs():
    assert q_radius(Graph.empty(1)).radius == 0.0
    assert q_radius(Graph.empty(4)).radius == 0.0
    with pytest.raises(LabArgumentError):
        q_radius(Graph.empty(0))


def test_perron_vector_normalizations():
    g = complete_multipartite((3, 1))
    by_max = q_radius(g)
    assert by_max.perron.max() == pytest.approx(1.0)
    assert by_max.residual <= 1e-9
    unit = q_radius(g, normalization="unit")
    assert np.linalg.norm(unit.perron) == pytest.approx(1.0)
    with pytest.raises(LabArgumentError):
        q_radius(g, normalization="sum")


def test_disconnected_graph_takes_largest_component():
    g = disjoint_union(Graph.complete(4), Graph.complete(2))
    result = q_radius(g)
    assert result.radius == pytest.approx(6.0)
    assert np.all(result.perron[4:] == 0.0)
    assert np.all(result.perron[:4] > 0.0)


def test_radii_match_numpy(rng):
    for _ in range(30):
        g = random_graph(int(rng.integers(2, 25)), 0.4, rng)
        expected = float(np.linalg.eigvalsh(signless_laplacian(g))[-1])
        assert q_radius(g).radius == pytest.approx(expected, abs=1e-8)
        adjacency = nx.to_numpy_array(g.to_networkx(), nodelist=range(g.n))
        assert a_radius(g).radius == pytest.approx(float(np.linalg.eigvalsh(adjacency)[-1]), abs=1e-8)


def test_second_largest_eigenvalue():
    result = q_radius(Graph.complete(4), with_second=True)
    assert result.second == pytest.approx(2.0)


def test_rayleigh_quotient_forms_agree(rng):
    g = random_graph(15, 0.5, rng)
    x = rng.uniform(-1, 1, 15)
    edge_form = sum((x[i] + x[j]) ** 2 for i, j in g.edges()) / float(x @ x)
    assert rayleigh_q(g, x) == pytest.approx(edge_form, rel=1e-12)
    assert rayleigh_q(g, x) <= q_radius(g).radius + 1e-9
    with pytest.raises(LabArgumentError):
        rayleigh_q(g, np.zeros(15))
    with pytest.raises(LabArgumentError):
        rayleigh_q(g, np.ones(3))


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6])
def test_closed_form_turan(r):
    for n in range(r, 41):
        assert q_radius(turan(r, n)).radius == pytest.approx(cai_fan_turan_q(n, r), abs=1e-8)
        if n % r == 0:
            assert cai_fan_turan_q(n, r) == pytest.approx(2 * (1 - 1 / r) * n)


def test_turan_q_of_t3_12_is_16():
    assert cai_fan_turan_q(12, 3) == 16.0


def test_bipartite_radius_is_n():
    for n in range(2, 41):
        for s in range(1, n // 2 + 1):
            assert q_radius(complete_multipartite((s, n - s))).radius == pytest.approx(n, abs=1e-8)


def test_complete_split_quotient_root():
    assert complete_split_q(2, 12) == pytest.approx((14 + math.sqrt(180)) / 2)
    assert complete_split_q(2, 12) == pytest.approx(13.7082039, abs=1e-6)
    assert complete_split_q(1, 6) == pytest.approx(6.0)
    with pytest.raises(LabArgumentError):
        complete_split_q(5, 5)


@pytest.mark.parametrize("n", range(1, 10))
def test_complete_split_closed_form_matches_solver_for_every_a(n):
    for a in range(n):
        assert q_radius(complete_split(a, n)).radius == pytest.approx(complete_split_q(a, n), abs=1e-8)
    assert complete_split_q(0, n) == 0.0


def test_turan_sizes_and_edges():
    assert turan_sizes(7, 3) == (3, 2, 2)
    assert turan_edges(7, 3) == 16
    assert turan_edges(9, 2) == 20
    with pytest.raises(LabArgumentError):
        turan_sizes(2, 3)


def test_quotient_matches_solver_and_perron_ratios():
    for sizes in [(3, 2), (4, 2, 1), (5, 3, 3, 1), (2, 2, 2)]:
        g = complete_multipartite(sizes)
        result = q_radius(g)
        quotient = quotient_multipartite(sizes)
        assert quotient.n == sum(sizes) and quotient.r == len(sizes)
        assert quotient.radius() == pytest.approx(result.radius, abs=1e-9)
        starts = np.cumsum((0,) + sizes[:-1])
        for i in range(len(sizes)):
            for j in range(len(sizes)):
                if i != j:
                    observed = result.perron[starts[i]] / result.perron[starts[j]]
                    assert observed == pytest.approx(eigencomponent_ratio(sizes, i, j, result.radius), abs=1e-8)


def test_quotient_argument_errors():
    with pytest.raises(LabArgumentError):
        quotient_multipartite((5,))
    with pytest.raises(LabArgumentError):
        quotient_multipartite((2, 0))
    with pytest.raises(LabArgumentError):
        eigencomponent_ratio((2, 2), 0, 0, 4.0)
    with pytest.raises(LabArgumentError):
        eigencomponent_ratio((3, 1), 1, 0, 0.5)


def test_left_perron_entries_below_half():
    sizes = (5, 3, 2)
    q = quotient_multipartite(sizes).radius()
    assert q > sum(sizes)
    y = quotient_left_perron(sizes, q)
    assert y.sum() == pytest.approx(1.0)
    assert np.all(y < 0.5)


def test_unbalanced_partitions_fall_below_turan():
    n, r = 10, 3
    q_turan = cai_fan_turan_q(n, r)
    for sizes in [(6, 2, 2), (5, 4, 1), (4, 4, 2)]:
        q = quotient_multipartite(sizes).radius()
        assert q_turan - q > balancing_gap_bound(r, n)


def test_join_bound_terms():
    sharp, loose = join_bound_terms(q_g=12.0, c1=1, a=4, n=10)
    assert loose == pytest.approx(4 * 1 * 6 / (4 - 2) ** 2)
    assert sharp == pytest.approx(4 * 1 * 6 / (12 - 6 - 2) ** 2)
    assert sharp <= loose
    with pytest.raises(LabArgumentError):
        join_bound_terms(q_g=12.0, c1=2, a=4, n=10)
    with pytest.raises(LabArgumentError):
        join_bound_terms(q_g=12.0, c1=1, a=10, n=10)


def test_two_class_closed_form():
    for n, r, c2 in [(11, 3, 1), (14, 3, 1), (13, 4, 3), (18, 5, 2)]:
        sizes = [(n - (r - 1) * c2) // r] + [(n + c2) // r] * (r - 1)
        assert sum(sizes) == n
        closed = two_class_quotient_q(n, r, c2)
        assert q_radius(complete_multipartite(sizes)).radius == pytest.approx(closed, abs=1e-8)
        assert closed <= two_class_quotient_upper(n, r, c2) + 1e-12


def test_turan_perron_minimum():
    for n, r in [(7, 3), (10, 4), (9, 2), (12, 3)]:
        assert q_radius(turan(r, n)).perron_min == pytest.approx(turan_perron_min(n, r), abs=1e-8)
        assert turan_perron_min(n, r) >= 1 - 2 / n
    assert turan_perron_min(12, 3) == 1.0


def test_asymptotic_estimates_are_finite():
    assert turan_q_lower_estimate(40, 3) < cai_fan_turan_q(40, 3)
    assert spectral_upper_estimate(30, 3, 0) == pytest.approx(cai_fan_turan_q(30, 3))
    assert spectral_upper_estimate(6, 3, 1) == math.inf
    with pytest.raises(LabArgumentError):
        turan_q_lower_estimate(2, 3)


def test_rayleigh_split_recombines(rng):
    g = random_graph(10, 0.6, rng)
    parts = PartitionVec(tuple(int(c) for c in rng.integers(0, 3, 10)), 3)
    split = rayleigh_split(g, parts, rng.uniform(0, 1, 10))
    assert split["total"] == pytest.approx(split["multipartite"] + split["inside"] - split["missing"])


def test_spectral_ties():
    assert is_spectral_tie(6.0, 6.0 + 1e-12)
    assert not is_spectral_tie(6.0, 6.001)
    assert is_spectral_tie(6.0, 6.000001, rel_tol=1e-6)


def test_rayleigh_floor_on_random_graphs(rng):
    for _ in range(30):
        g = random_graph(int(rng.integers(2, 20)), 0.5, rng)
        assert q_radius(g).radius >= 4 * g.num_edges / g.n - 1e-9
