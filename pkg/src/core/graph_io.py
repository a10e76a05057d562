"""
JSON files for graphs and contraction trees.

Graph layout::

    {"vertices": ["A", "B"],
     "edges": [{"u": "A", "v": "B", "w": 8}],
     "free": [{"v": "A", "dims": [2]}],
     "rotation": {"A": [0], "B": [0]}}

"vertices", "free" and "rotation" are optional. Trees are nested
{"leaf": id} / {"children": [left, right]} objects; a free tree is stored
rooted on its first arc with "free": true on the top object.
"""

import json
from typing import Any, Dict, List, Optional, Tuple, Union

from .ctree import ContractionTree, FreeContractionTree, RootedContractionTree, from_nested, root_at, unroot
from .errors import BadShape, GraphFormatError
from .netgraph import NetworkGraph, edge_key

Rotation = Dict[str, List[str]]


def read_json(path: str) -> Any:
    """
    Load a JSON document.

    Raises:
        GraphFormatError: If the file is not valid JSON
        OSError: If the file cannot be read
    """
    with open(path, "r") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise GraphFormatError(f"invalid JSON ({e.msg} at line {e.lineno})", path) from None


def write_json(data: Any, path: str) -> None:
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def _require(condition: bool, message: str, field: str) -> None:
    if not condition:
        raise GraphFormatError(message, field)


def graph_from_dict(data: Any) -> Tuple[NetworkGraph, Optional[Rotation]]:
    """
    Parse a graph document.

    Returns:
        The raw graph and the rotation system if one was supplied

    Raises:
        GraphFormatError: With the path of the offending field
    """
    _require(isinstance(data, dict), "expected an object", "$")
    edges_data = data.get("edges")
    _require(isinstance(edges_data, list), "expected a list of edges", "edges")
    edges = []
    for i, item in enumerate(edges_data):
        _require(isinstance(item, dict), "expected an object", f"edges[{i}]")
        for key in ("u", "v", "w"):
            _require(key in item, "missing field", f"edges[{i}].{key}")
        _require(isinstance(item["u"], (str, int)), "expected a vertex id", f"edges[{i}].u")
        _require(isinstance(item["v"], (str, int)), "expected a vertex id", f"edges[{i}].v")
        edges.append((str(item["u"]), str(item["v"]), item["w"]))

    vertices = data.get("vertices")
    if vertices is None:
        vertices = sorted({x for u, v, _ in edges for x in (u, v)})
    _require(isinstance(vertices, list), "expected a list of vertex ids", "vertices")
    vertices = [str(v) for v in vertices]

    free = {}
    for i, item in enumerate(data.get("free", [])):
        _require(isinstance(item, dict) and "v" in item and isinstance(item.get("dims"), list),
                 "expected {\"v\": id, \"dims\": [...]}", f"free[{i}]")
        free.setdefault(str(item["v"]), []).extend(item["dims"])

    rotation = data.get("rotation")
    if rotation is not None:
        _require(isinstance(rotation, dict), "expected vertex → list of edge indices", "rotation")
        rotation = {str(v): _rotation_neighbours(str(v), around, edges, f"rotation.{v}") for v, around in rotation.items()}

    return NetworkGraph(vertices, edges, free_indices=free), rotation


def _rotation_neighbours(v: str, around: Any, edges: List[Tuple[str, str, Any]], field: str) -> List[str]:
    """
    Neighbours of v in rotation order.

    Integer entries index the "edges" array, so parallel edges stay apart;
    string entries name the neighbour directly.
    """
    _require(isinstance(around, list), "expected a list of edge indices", field)
    neighbours = []
    for i, item in enumerate(around):
        _require(not isinstance(item, bool) and isinstance(item, (int, str)), "expected an edge index", f"{field}[{i}]")
        if isinstance(item, str):
            neighbours.append(item)
            continue
        _require(0 <= item < len(edges), f"edge index {item} out of range", f"{field}[{i}]")
        a, b, _ = edges[item]
        _require(v in (a, b), f"edge {item} does not touch {v!r}", f"{field}[{i}]")
        neighbours.append(b if a == v else a)
    return neighbours


def graph_to_dict(g: NetworkGraph, rotation: Optional[Rotation] = None) -> Dict[str, Any]:
    """Serialize a graph; a rotation is written as indices into the edge list, first parallel edge only."""
    data: Dict[str, Any] = {
        "vertices": list(g.vertices),
        "edges": [{"u": u, "v": v, "w": w} for u, v, w in g.edge_list],
    }
    if g.free_indices:
        data["free"] = [{"v": v, "dims": list(dims)} for v, dims in sorted(g.free_indices.items())]
    if rotation is not None:
        first: Dict[Tuple[str, str], int] = {}
        for i, (u, v, _) in enumerate(g.edge_list):
            first.setdefault(edge_key(u, v), i)
        data["rotation"] = {
            v: [first[edge_key(v, u)] for u in around if edge_key(v, u) in first] for v, around in sorted(rotation.items())
        }
    return data


def load_graph(path: str) -> Tuple[NetworkGraph, Optional[Rotation]]:
    return graph_from_dict(read_json(path))


def save_graph(g: NetworkGraph, path: str, rotation: Optional[Rotation] = None) -> None:
    write_json(graph_to_dict(g, rotation), path)


def _nested_to_dict(nested) -> Dict[str, Any]:
    if isinstance(nested, str):
        return {"leaf": nested}
    return {"children": [_nested_to_dict(child) for child in nested]}


def _dict_to_nested(data: Any, field: str):
    _require(isinstance(data, dict), "expected a tree node object", field)
    if "leaf" in data:
        return str(data["leaf"])
    children = data.get("children")
    _require(isinstance(children, list) and len(children) == 2, "expected exactly two children", f"{field}.children")
    return [_dict_to_nested(child, f"{field}.children[{i}]") for i, child in enumerate(children)]


def tree_to_dict(t: ContractionTree) -> Dict[str, Any]:
    """Serialize a tree; labels are not stored since they follow from the graph."""
    if isinstance(t, RootedContractionTree):
        return _nested_to_dict(t.to_nested())
    data = _nested_to_dict(root_at(t, t.arcs[0]).to_nested())
    data["free"] = True
    return data


def tree_from_dict(data: Any, g: NetworkGraph) -> Union[FreeContractionTree, RootedContractionTree]:
    """
    Rebuild a tree over the simple graph g.

    Raises:
        GraphFormatError: If the document is malformed
        BadLeafMap: If the leaves do not match g's vertices
    """
    nested = _dict_to_nested(data, "$")
    if isinstance(nested, str):
        raise BadShape("a contraction tree needs at least two leaves")
    rooted = from_nested(nested, g)
    return unroot(rooted) if data.get("free") else rooted


def load_tree(path: str, g: NetworkGraph) -> Union[FreeContractionTree, RootedContractionTree]:
    return tree_from_dict(read_json(path), g)


def save_tree(t: ContractionTree, path: str) -> None:
    write_json(tree_to_dict(t), path)
