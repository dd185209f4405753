import pytest
from conftest import random_graph
from networkx.algorithms.isomorphism import GraphMatcher

from turan_lab.core.containment import (
    chromatic_number,
    contains,
    contains_through,
    forbidden_r,
    is_color_critical,
    is_f_free,
    is_saturated,
)
from turan_lab.core.errors import CapacityError, LabArgumentError, PreconditionError
from turan_lab.core.families import book, clique, complete_multipartite, cycle, fan, turan
from turan_lab.core.graph import Graph


def test_triangle_in_complete_graph(k3):
    witness = contains(Graph.complete(5), k3)
    assert witness is not None
    assert witness.is_valid(Graph.complete(5), k3)


def test_bipartite_graphs_are_triangle_free(k3):
    assert is_f_free(complete_multipartite((4, 5)), k3)
    assert not is_f_free(turan(3, 6), k3)


def test_odd_cycle_in_petersen(petersen, c5):
    witness = contains(petersen, c5)
    assert witness is not None and witness.is_valid(petersen, c5)
    assert contains(petersen, Graph.complete(3)) is None
    assert contains(petersen, cycle(4)) is None


def test_matches_networkx_monomorphism(rng):
    patterns = [cycle(4), cycle(5), fan(2, 3), book(2), complete_multipartite((2, 3))]
    for _ in range(40):
        g = random_graph(int(rng.integers(5, 10)), float(rng.uniform(0.3, 0.7)), rng)
        for f in patterns:
            expected = GraphMatcher(g.to_networkx(), f.to_networkx()).subgraph_is_monomorphic()
            witness = contains(g, f)
            assert (witness is not None) == expected
            if witness is not None:
                assert witness.is_valid(g, f)


def test_domains_restrict_images(k3, t3_6):
    parts = [0b000011, 0b001100, 0b110000]
    witness = contains(t3_6, k3, parts)
    assert witness is not None
    assert [witness.mapping[i] >> 1 for i in range(3)] == [0, 1, 2]
    assert contains(t3_6, k3, [0b000011, 0b000011, 0b110000]) is None
    with pytest.raises(LabArgumentError):
        contains(t3_6, k3, [0b1])


def test_contains_through_vertex():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4)])
    assert contains_through(g, clique(3), 1) is not None
    assert contains_through(g, clique(3), 3) is None
    witness = contains_through(g, clique(3), 2, anchors=[0])
    assert witness is not None and 2 in witness.mapping
    with pytest.raises(LabArgumentError):
        contains_through(g, clique(3), 6)


def test_saturation(k3):
    assert is_saturated(complete_multipartite((3, 3)), k3)
    assert not is_saturated(cycle(6), k3)
    with pytest.raises(PreconditionError):
        is_saturated(Graph.complete(3), k3)


def test_chromatic_numbers(petersen):
    assert chromatic_number(Graph.empty(0)) == 0
    assert chromatic_number(Graph.empty(4)) == 1
    assert chromatic_number(cycle(6)) == 2
    assert chromatic_number(cycle(7)) == 3
    assert chromatic_number(petersen) == 3
    assert chromatic_number(Graph.complete(6)) == 6
    with pytest.raises(CapacityError):
        chromatic_number(Graph.empty(17))


def test_color_criticality_and_r():
    assert is_color_critical(cycle(5))
    assert is_color_critical(Graph.complete(4))
    assert not is_color_critical(cycle(4))
    assert forbidden_r(fan(2, 3)) == 2
    assert forbidden_r(fan(1, 5)) == 4
    assert forbidden_r(book(3)) == 2
