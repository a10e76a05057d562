import json

import pytest

from graph_factories import grid_2x3
from src.core.ctree import free_from_nested, from_nested
from src.core.errors import BadLeafMap, GraphFormatError
from src.core.fingerprint import file_fingerprint, graph_fingerprint
from src.core.graph_io import graph_from_dict, load_graph, load_tree, read_json, save_graph, save_tree, tree_from_dict
from src.core.netgraph import NetworkGraph


def test_graph_file_round_trip(tmp_path):
    g = NetworkGraph("AB", [("A", "B", 2), ("A", "B", 3)], free_indices={"A": [4]})
    path = tmp_path / "g.json"
    save_graph(g, str(path), rotation={"A": ["B"], "B": ["A"]})
    loaded, rotation = load_graph(str(path))
    assert loaded == g
    assert rotation == {"A": ["B"], "B": ["A"]}
    assert read_json(str(path))["rotation"] == {"A": [0], "B": [0]}


def test_rotation_lists_edge_indices():
    data = {
        "edges": [
            {"u": "A", "v": "B", "w": 2},
            {"u": "B", "v": "C", "w": 2},
            {"u": "A", "v": "C", "w": 2},
            {"u": "B", "v": "A", "w": 3},
        ],
        "rotation": {"A": [0, 3, 2], "B": [1, 3, 0], "C": [2, 1]},
    }
    _, rotation = graph_from_dict(data)
    assert rotation == {"A": ["B", "B", "C"], "B": ["C", "A", "A"], "C": ["A", "B"]}


def test_rotation_entries_are_checked():
    edges = [{"u": "A", "v": "B", "w": 2}, {"u": "B", "v": "C", "w": 2}]
    with pytest.raises(GraphFormatError) as info:
        graph_from_dict({"edges": edges, "rotation": {"A": [5]}})
    assert info.value.field == "rotation.A[0]"
    with pytest.raises(GraphFormatError) as info:
        graph_from_dict({"edges": edges, "rotation": {"A": [0, 1]}})
    assert info.value.field == "rotation.A[1]"
    with pytest.raises(GraphFormatError):
        graph_from_dict({"edges": edges, "rotation": {"A": [True]}})


def test_vertices_default_to_edge_endpoints():
    g, rotation = graph_from_dict({"edges": [{"u": "B", "v": "A", "w": 2}]})
    assert g.vertices == ("A", "B")
    assert rotation is None


def test_format_errors_name_the_field():
    with pytest.raises(GraphFormatError) as info:
        graph_from_dict({"edges": [{"u": "A", "v": "B"}]})
    assert info.value.field == "edges[0].w"
    with pytest.raises(GraphFormatError) as info:
        graph_from_dict({"edges": [{"u": "A", "v": "B", "w": -1}]})
    assert info.value.field == "edges[0].w"
    with pytest.raises(GraphFormatError):
        graph_from_dict([])


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(GraphFormatError):
        load_graph(str(path))


def test_rooted_tree_round_trip(tmp_path):
    g = grid_2x3()
    t = from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], g)
    path = tmp_path / "tree.json"
    save_tree(t, str(path))
    assert load_tree(str(path), g) == t


def test_free_tree_round_trip(tmp_path):
    g = grid_2x3()
    t = free_from_nested([[["A", "B"], ["D", "E"]], ["C", "F"]], g)
    path = tmp_path / "tree.json"
    save_tree(t, str(path))
    assert json.loads(path.read_text())["free"] is True
    assert load_tree(str(path), g) == t


def test_tree_leaves_must_match_graph():
    with pytest.raises(BadLeafMap):
        tree_from_dict({"children": [{"leaf": "A"}, {"leaf": "Z"}]}, NetworkGraph("AB", [("A", "B", 2)]))


def test_fingerprints_are_stable(tmp_path):
    g = grid_2x3()
    path = tmp_path / "g.json"
    save_graph(g, str(path))
    first = file_fingerprint(str(path))
    save_graph(g, str(path))
    assert file_fingerprint(str(path)) == first
    assert len(first) == 64
    assert graph_fingerprint(g) == graph_fingerprint(grid_2x3())
    assert graph_fingerprint(g) != graph_fingerprint(grid_2x3(w=3))
