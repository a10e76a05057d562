import os

import pytest

from graph_factories import grid_2x3, k5, single_edge
from src.core.errors import InvariantViolation, NotPlanar
from src.core.graph_io import read_json, save_graph, write_json
from src.core.netgraph import NetworkGraph
from src.experiments.netgen import grid_rotation, uniform_grid
from src.experiments.pipeline import run_pipeline, validate
from src.solver.oracle import exact_min_ct, min_ct_over_bs_optimal


def write_graph(tmp_path, g, rotation=None):
    path = str(tmp_path / "graph.json")
    save_graph(g, path, rotation)
    return path


def test_grid_pipeline(tmp_path):
    g = grid_2x3()
    result = run_pipeline(write_graph(tmp_path, g), str(tmp_path / "out"), n_runs=10, seed=0, exact_pow2=True)
    assert result.solution.width.carw == 3
    assert result.metrics.bs == 8
    assert result.solution.ct == min_ct_over_bs_optimal(g)[0] >= exact_min_ct(g)[0]
    assert os.path.exists(result.tree_path)
    data = read_json(result.sequence_path)
    assert data["ct"] == str(result.solution.ct)
    assert len(data["steps"]) == 5
    assert set(result.timings) == {"simplify", "embed", "width", "carve", "sequence", "validate"}


def test_non_planar_input(tmp_path):
    with pytest.raises(NotPlanar):
        run_pipeline(write_graph(tmp_path, k5()), str(tmp_path / "out"))


def test_two_vertices_give_one_step(tmp_path):
    result = run_pipeline(write_graph(tmp_path, single_edge(8)), str(tmp_path / "out"), n_runs=3)
    assert len(result.solution.sequence.steps) == 1
    assert result.solution.ct == 8


def test_supplied_rotation_is_used(tmp_path):
    g, _ = uniform_grid(3, 2)
    result = run_pipeline(write_graph(tmp_path, g, grid_rotation(3)), str(tmp_path / "out"), n_runs=2, exact_pow2=True)
    assert len(result.solution.embedding.faces) == 5
    assert result.metrics.bs == 2 ** result.solution.width.carw


def test_raw_network_is_simplified(tmp_path):
    raw = NetworkGraph(
        ["A", "B", "C"],
        [("A", "B", 2), ("A", "B", 3), ("B", "C", 1), ("A", "C", 4), ("C", "C", 5)],
        free_indices={"A": [7]},
    )
    result = run_pipeline(write_graph(tmp_path, raw), str(tmp_path / "out"), n_runs=2)
    assert result.solution.graph.weight == {("A", "B"): 6, ("A", "C"): 4}
    assert len(result.solution.sequence.steps) == 2


def test_tampered_sequence_is_caught(tmp_path):
    result = run_pipeline(write_graph(tmp_path, grid_2x3()), str(tmp_path / "out"), n_runs=2, exact_pow2=True)
    data = read_json(result.sequence_path)
    data["steps"][0]["cost"] = str(int(data["steps"][0]["cost"]) + 1)
    write_json(data, result.sequence_path)
    with pytest.raises(InvariantViolation):
        validate(result.solution, result.tree_path, result.sequence_path, exact_pow2=True)


def test_rotation_by_edge_index_with_parallel_edges(tmp_path):
    path = str(tmp_path / "c4.json")
    write_json(
        {
            "edges": [
                {"u": "A", "v": "B", "w": 2},
                {"u": "B", "v": "C", "w": 2},
                {"u": "C", "v": "D", "w": 2},
                {"u": "D", "v": "A", "w": 2},
                {"u": "A", "v": "B", "w": 3},
            ],
            "rotation": {"A": [0, 4, 3], "B": [1, 4, 0], "C": [2, 1], "D": [3, 2]},
        },
        path,
    )
    result = run_pipeline(path, str(tmp_path / "out"), n_runs=2)
    assert result.solution.graph.weight[("A", "B")] == 6
    assert result.solution.embedding.rotation["A"] == ["B", "D"]
    assert len(result.solution.embedding.faces) == 2
