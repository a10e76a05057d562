import pytest

from graph_factories import cycle, grid_2x3, path_abc, random_free_tree, random_planar, rng, single_edge, triangle
from src.core.ctree import (
    FreeContractionTree,
    Metrics,
    free_from_nested,
    from_nested,
    label_tree,
    metrics,
    node_weight_identity_check,
    root_at,
    unroot,
)
from src.core.errors import BadLeafMap, BadShape, InvariantViolation, NoSuchArc
from src.core.netgraph import NetworkGraph
from src.core.tree_decomposition import edge_paths_are_paths
from src.solver.oracle import enumerate_free_trees


def test_path_labels():
    t = free_from_nested([["A", "B"], "C"], path_abc())
    labels = sorted(sorted(t.arc_label(arc).edges) for arc in t.arcs)
    assert labels == [[("A", "B")], [("A", "B"), ("B", "C")], [("B", "C")]]
    (node,) = t.internal_nodes
    assert t.node_label(node).edges == {("A", "B"), ("B", "C")}


def test_path_metrics():
    m = metrics(free_from_nested([["A", "B"], "C"], path_abc()))
    assert (m.bs, m.bt, m.ct) == (6, 6, 6)


def test_triangle_metrics():
    m = metrics(free_from_nested([["A", "B"], "C"], triangle()))
    assert (m.bs, m.bt, m.ct) == (12, 24, 24)


def test_triangle_rootings():
    t = free_from_nested([["A", "B"], "C"], triangle())
    leaf_arc = {v: next(arc for arc in t.arcs if t.leaf_node(v) in arc) for v in "ABC"}
    assert metrics(root_at(t, leaf_arc["A"])).ct == 32
    assert metrics(root_at(t, leaf_arc["B"])).ct == 30


def test_single_edge_tree():
    t = free_from_nested(["A", "B"], single_edge(8))
    assert len(t.arcs) == 1
    assert t.internal_nodes == []
    m = metrics(t)
    assert (m.bs, m.bt, m.ct) == (8, 8, 8)
    assert metrics(root_at(t, t.arcs[0])).ct == 8


def test_grid_example_tree():
    g = grid_2x3()
    rooted = from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], g)
    assert rooted.node_label(rooted.root).edges == {("B", "C"), ("E", "F")}
    free = unroot(rooted)
    m = metrics(free)
    assert (m.bs, m.bt, m.ct) == (8, 16, 56)
    assert metrics(rooted).ct == 60
    assert node_weight_identity_check(free)


def test_root_at_and_unroot_are_inverse():
    t = free_from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], grid_2x3())
    for arc in t.arcs:
        rooted = root_at(t, arc)
        assert unroot(rooted) == t
        assert metrics(rooted).bs == metrics(t).bs
        assert metrics(rooted).bt == metrics(t).bt


def test_root_at_unknown_arc():
    t = free_from_nested([["A", "B"], "C"], path_abc())
    with pytest.raises(NoSuchArc):
        root_at(t, (97, 98))


def test_label_tree_rejects_bad_degree():
    with pytest.raises(BadShape):
        label_tree({0: [1, 2, 3, 4], 1: [0], 2: [0], 3: [0], 4: [0]}, {1: "A", 2: "B", 3: "C", 4: "D"},
                   cycle(4))


def test_label_tree_rejects_bad_leaf_map():
    with pytest.raises(BadLeafMap):
        label_tree({0: [1, 2, 3], 1: [0], 2: [0], 3: [0]}, {1: "A", 2: "B", 3: "B"}, path_abc())


def test_label_tree_returns_free_tree():
    t = label_tree({0: [1, 2, 3], 1: [0], 2: [0], 3: [0]}, {1: "A", 2: "B", 3: "C"}, path_abc())
    assert isinstance(t, FreeContractionTree)


def test_heap_labels_have_max_heap_property():
    rooted = from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], grid_2x3())
    labels = rooted.heap_labels()
    assert sorted(labels.values()) == list(range(1, 12))
    for node in rooted.internal_nodes:
        assert all(labels[node] > labels[c] for c in rooted.children(node))


def test_children_ordered_by_smallest_vertex():
    rooted = from_nested(["C", ["B", "A"]], path_abc())
    assert rooted.to_nested() == [["A", "B"], "C"]


def test_metrics_bound_check_raises():
    with pytest.raises(InvariantViolation):
        Metrics(n=4, bs=10, bt=5, ct=5).check_bounds()


def test_random_trees_satisfy_identity_bounds_and_path_property():
    generator = rng(7)
    for _ in range(1000):
        n = int(generator.integers(3, 9))
        g = random_planar(generator, n, weights=(2, 3, 4, 5))
        t = random_free_tree(g, generator)
        assert node_weight_identity_check(t)
        assert metrics(t).bound_violations() == []
        assert len(t.internal_nodes) == n - 2
        assert len(t.arcs) == 2 * n - 3
    for _ in range(50):
        g = random_planar(generator, 7)
        assert edge_paths_are_paths(random_free_tree(g, generator)) == []


def test_splits_identify_isomorphic_trees():
    g = grid_2x3()
    a = free_from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], g)
    b = free_from_nested([["C", "F"], [["E", "D"], ["B", "A"]]], g)
    c = free_from_nested([[["A", "D"], ["B", "E"]], ["C", "F"]], g)
    assert a == b
    assert a != c


def test_space_and_time_bottlenecks_pick_different_trees():
    g = NetworkGraph(
        "ABCD",
        [("A", "B", 4), ("C", "D", 128), ("A", "C", 16), ("B", "D", 16), ("A", "D", 8), ("B", "C", 8)],
    )
    found = [metrics(t) for t in enumerate_free_trees(g)]
    assert len(found) == 3
    assert sorted((m.log2_bs, m.log2_bt) for m in found) == [(14, 21), (15, 19), (17, 20)]
    best_bs = {i for i, m in enumerate(found) if m.bs == min(x.bs for x in found)}
    best_bt = {i for i, m in enumerate(found) if m.bt == min(x.bt for x in found)}
    assert best_bs.isdisjoint(best_bt)
