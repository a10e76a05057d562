import pytest

from graph_factories import cycle, path_abc, random_planar, rng, triangle
from src.core.errors import (
    BadPartition,
    DisconnectedGraph,
    EmptyGraph,
    GraphFormatError,
    NoSuchEdge,
    OverlappingSets,
)
from src.core.netgraph import (
    NetworkGraph,
    contract_edge,
    cut_set,
    cut_weight3,
    edge_key,
    is_biconnected,
    merge_vertices,
    simplify,
    without_unit_edges,
)


def test_simplify_merges_parallel_edges_by_product():
    g = NetworkGraph(["A", "B"], [("A", "B", 2), ("B", "A", 3)])
    s = simplify(g)
    assert s.weight == {("A", "B"): 6}


def test_simplify_drops_loops_and_free_indices():
    g = NetworkGraph(["A", "B"], [("A", "A", 5), ("A", "B", 4)], free_indices={"A": [2, 3]})
    s = simplify(g)
    assert s.weight == {("A", "B"): 4}
    assert s.free_indices == {}


def test_simplify_removes_unit_edge_on_cycle():
    g = NetworkGraph("ABC", [("A", "B", 1), ("B", "C", 2), ("A", "C", 2)])
    s = simplify(g)
    assert ("A", "B") not in s.weight
    assert s.unit_bridges == frozenset()


def test_simplify_keeps_unit_bridge_and_flags_it():
    g = NetworkGraph("ABC", [("A", "B", 1), ("B", "C", 2)])
    s = simplify(g)
    assert s.weight[("A", "B")] == 1
    assert s.unit_bridges == {("A", "B")}


def test_simplify_is_idempotent():
    g = NetworkGraph("ABCD", [("A", "B", 2), ("A", "B", 2), ("B", "C", 1), ("C", "D", 3), ("D", "A", 1), ("C", "C", 7)])
    once = simplify(g)
    assert simplify(once) == once


def test_simplify_rejects_empty_and_disconnected():
    with pytest.raises(EmptyGraph):
        simplify(NetworkGraph([], []))
    with pytest.raises(DisconnectedGraph):
        simplify(NetworkGraph("ABCD", [("A", "B", 2), ("C", "D", 2)]))


def test_bad_weight_is_a_format_error():
    with pytest.raises(GraphFormatError):
        NetworkGraph("AB", [("A", "B", 0)])
    with pytest.raises(GraphFormatError):
        NetworkGraph("AB", [("A", "Z", 2)])


def test_cut_set_on_path():
    g = path_abc()
    cut = cut_set(g, {"A"}, {"B", "C"})
    assert cut.edges == {("A", "B")}
    assert cut.exact_weight == 2
    assert cut_set(g, {"A", "B"}, {"C"}).exact_weight == 3


def test_cut_set_overlap():
    with pytest.raises(OverlappingSets):
        cut_set(path_abc(), {"A", "B"}, {"B"})


def test_cut_weight3_triangle():
    cut = cut_weight3(triangle(), {"A"}, {"B"}, {"C"})
    assert cut.exact_weight == 24
    assert len(cut) == 3


def test_cut_weight3_requires_partition():
    with pytest.raises(BadPartition):
        cut_weight3(triangle(), {"A"}, {"B"}, set())
    with pytest.raises(BadPartition):
        cut_weight3(triangle(), {"A", "B"}, {"B"}, {"C"})


def test_contract_edge_on_c4_gives_weighted_triangle():
    g = contract_edge(cycle(4), ("A", "B"))
    assert g.vertices == ("AB", "C", "D")
    assert sorted(g.weight.values()) == [2, 2, 2]
    assert g.members("AB") == {"A", "B"}


def test_contract_edge_merges_parallel_bundle():
    g = contract_edge(triangle(), ("A", "B"))
    assert g.weight == {("AB", "C"): 12}


def test_contraction_never_increases_total_weight():
    generator = rng(3)
    for _ in range(10):
        g = random_planar(generator, int(generator.integers(3, 9)), weights=(2, 3, 4, 8))
        for e in sorted(g.weight):
            minor = contract_edge(g, e)
            assert minor.total_weight() <= g.total_weight()
            assert minor.total_weight() * g.weight[e] == g.total_weight()


def test_contract_missing_edge():
    with pytest.raises(NoSuchEdge):
        contract_edge(path_abc(), ("A", "C"))


def test_merge_vertices_non_adjacent():
    g = merge_vertices(path_abc(), "A", "C")
    assert g.weight == {edge_key("AC", "B"): 6}


def test_is_biconnected():
    assert is_biconnected(cycle(4))
    assert not is_biconnected(path_abc())
    assert is_biconnected(NetworkGraph("AB", [("A", "B", 3)]))
    assert not is_biconnected(NetworkGraph("A", []))


def test_without_unit_edges():
    g = simplify(NetworkGraph("ABC", [("A", "B", 1), ("B", "C", 2)]))
    assert without_unit_edges(g).weight == {("B", "C"): 2}


def test_star_weight():
    assert triangle().star_weight("A") == 8
