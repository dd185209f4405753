import math

import pytest

from turan_lab.core.containment import chromatic_number, contains
from turan_lab.core.errors import LabArgumentError
from turan_lab.core.families import (
    FamilySpec,
    book,
    clique,
    complete_multipartite,
    complete_split,
    cycle,
    efgg_embedded_edges,
    efgg_extremal,
    fan,
    odd_cycle,
    parse_graph_spec,
    turan,
    turan_edge_window,
)
from turan_lab.core.graph import Graph
from turan_lab.core.spectral import turan_edges


def test_turan_graph_is_balanced():
    g = turan(3, 8)
    assert g.n == 8
    assert g.num_edges == turan_edges(8, 3) == 21
    assert sorted(set(g.degrees())) == [5, 6]


def test_edge_window_contains_turan_number():
    for r in range(2, 7):
        for n in range(r, 61):
            low, high = turan_edge_window(n, r)
            assert low <= turan_edges(n, r) <= high


def test_fan_and_book_shapes():
    bowtie = fan(2, 3)
    assert bowtie.n == 5 and bowtie.num_edges == 6
    assert bowtie.degree(0) == 4
    assert fan(1, 4) == clique(4)
    assert chromatic_number(fan(3, 4)) == 4

    b3 = book(3)
    assert b3.n == 5 and b3.num_edges == 7
    assert b3.has_edge(0, 1)


def test_cycles():
    assert odd_cycle(2) == cycle(5)
    assert cycle(6).num_edges == 6
    with pytest.raises(LabArgumentError):
        cycle(2)
    with pytest.raises(LabArgumentError):
        odd_cycle(0)


def test_complete_split_edges():
    g = complete_split(2, 12)
    assert g.num_edges == math.comb(2, 2) + 2 * 10
    assert complete_split(0, 3) == Graph.empty(3)
    with pytest.raises(LabArgumentError):
        complete_split(4, 4)


def test_complete_multipartite_requires_positive_parts():
    assert complete_multipartite((2, 3)).num_edges == 6
    with pytest.raises(LabArgumentError):
        complete_multipartite((2, 0))


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_planted_graph_degrees(k):
    m, edges = efgg_embedded_edges(k)
    planted = Graph.from_edges(m, edges)
    if k % 2:
        assert planted.num_edges == 2 * math.comb(k, 2)
    else:
        assert planted.num_edges == k * k - 3 * k // 2
    assert planted.max_degree() == k - 1


def test_efgg_construction_avoids_the_fan():
    g = efgg_extremal(11, 3)
    assert g.num_edges == turan_edges(11, 2) + 6
    assert contains(g, fan(3, 3)) is None
    with pytest.raises(LabArgumentError):
        efgg_extremal(8, 3)


def test_family_spec_parsing():
    spec = FamilySpec.parse("fan:2,4")
    assert spec.kind == "fan" and spec.params == (2, 4)
    assert str(spec) == "fan:2,4"
    assert FamilySpec.parse("multipartite:3,2,2").build() == complete_multipartite((3, 2, 2))
    for bad in ["fan", "fan:2", "nonsense:3", "clique:x"]:
        with pytest.raises(LabArgumentError):
            FamilySpec.parse(bad)
    with pytest.raises(LabArgumentError):
        FamilySpec.parse("g1:11,4").build()


def test_graph_spec_forms():
    assert parse_graph_spec("g6:C~").graph == clique(4)
    assert parse_graph_spec("family:turan-clique:4").graph == clique(4)
    bare = parse_graph_spec("turan:3,7")
    assert bare.graph == turan(3, 7)
    assert bare.label == "turan:3,7"
    assert parse_graph_spec("g6:Bg").graph6 == "Bg"
