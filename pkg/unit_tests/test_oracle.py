import math

import numpy as np
import pytest

from graph_factories import cycle, grid, grid_2x3, path_abc, random_free_tree, random_planar, rng, single_edge, triangle
from src.core.ctree import free_from_nested, metrics
from src.core.errors import DimensionMismatch, TooLarge
from src.solver.oracle import (
    DenseTensor,
    brute_bs,
    brute_cw,
    enumerate_free_trees,
    enumerate_rooted_trees,
    exact_min_ct,
    execute,
    full_contraction_reference,
    min_ct_over_bs_optimal,
    ones_tensors,
    random_tensors,
    rooted_shapes,
)
from src.solver.sequencer import optimal_root, sequence


def double_factorial(k):
    return math.prod(range(k, 0, -2))


def test_rooted_shape_counts():
    for n, expected in zip(range(3, 8), [3, 15, 105, 945, 10395]):
        labels = [str(i) for i in range(n)]
        assert sum(1 for _ in rooted_shapes(labels)) == expected == double_factorial(2 * n - 3)


def test_free_tree_counts():
    for n in range(4, 9):
        labels = [str(i) for i in range(n - 1)]
        assert sum(1 for _ in rooted_shapes(labels)) == double_factorial(2 * n - 5)
    assert len(list(enumerate_free_trees(cycle(4)))) == 3
    trees = list(enumerate_free_trees(grid_2x3()))
    assert len(trees) == 105
    assert len({t.splits() for t in trees}) == 105


def test_enumerate_rooted_trees_on_triangle():
    assert len(list(enumerate_rooted_trees(triangle()))) == 3


def test_brute_cw_examples():
    assert brute_cw(single_edge(8)) == 3
    assert brute_cw(cycle(4)) == 2
    assert brute_cw(path_abc()) == pytest.approx(math.log2(6))


def test_brute_bs_tree_achieves_bs():
    bs, tree = brute_bs(grid_2x3())
    assert bs == 8
    assert metrics(tree).bs == 8


def test_brute_force_size_limit():
    with pytest.raises(TooLarge):
        brute_cw(cycle(10))


def test_exact_min_ct_examples():
    ct, tree = exact_min_ct(path_abc())
    assert ct == 8
    assert metrics(tree).ct == 8
    assert exact_min_ct(triangle())[0] == 30
    assert exact_min_ct(single_edge(7))[0] == 7


def test_exact_witness_matches_value_on_random_graphs():
    generator = rng(13)
    for _ in range(20):
        g = random_planar(generator, int(generator.integers(3, 9)), weights=(2, 3, 4))
        ct, tree = exact_min_ct(g)
        assert metrics(tree).ct == ct
        if g.n <= 7:
            assert ct <= min_ct_over_bs_optimal(g)[0]


def test_exact_min_ct_is_a_lower_bound_for_every_rooting():
    g = grid_2x3()
    ct, _ = exact_min_ct(g)
    assert all(metrics(optimal_root(t)).ct >= ct for t in enumerate_free_trees(g))


def test_exact_min_ct_size_limit():
    with pytest.raises(TooLarge):
        exact_min_ct(grid(3, 7))


def test_all_ones_contractions_count_assignments():
    for g, expected in [(triangle(), 24), (path_abc(), 6)]:
        seq = sequence(optimal_root(free_from_nested([["A", "B"], "C"], g)))
        assert execute(g, ones_tensors(g), seq) == pytest.approx(expected)
        assert full_contraction_reference(g, ones_tensors(g)) == pytest.approx(expected)


def test_execute_matches_reference_on_random_networks():
    generator = rng(17)
    for i in range(100):
        g = random_planar(generator, int(generator.integers(2, 7)), weights=(2, 3), biconnected=bool(i % 2))
        tensors = random_tensors(g, generator)
        reference = full_contraction_reference(g, tensors)
        t = random_free_tree(g, generator) if g.n > 2 else free_from_nested(list(g.vertices), g)
        first = execute(g, tensors, sequence(optimal_root(t)))
        other = random_free_tree(g, generator) if g.n > 2 else t
        second = execute(g, tensors, sequence(optimal_root(other)))
        assert abs(first - reference) <= 1e-8 * max(1.0, abs(reference))
        assert abs(second - first) <= 1e-8 * max(1.0, abs(first))


def test_tensor_shape_must_match_vertex():
    g = path_abc()
    tensors = ones_tensors(g)
    tensors["A"] = DenseTensor(tensors["A"].labels, np.ones((3,)))
    seq = sequence(optimal_root(free_from_nested([["A", "B"], "C"], g)))
    with pytest.raises(DimensionMismatch):
        execute(g, tensors, seq)
