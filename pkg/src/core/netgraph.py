"""
Weighted undirected graph model of a tensor network.
Vertices are tensors, edges are shared indices and edge weights are bond
dimensions. Handles simplification, cut computations, minors and
biconnectivity.
"""

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from .errors import (
    BadPartition,
    CarveError,
    DisconnectedGraph,
    EmptyGraph,
    GraphFormatError,
    NoSuchEdge,
    OverlappingSets,
)

Edge = Tuple[str, str]
RawEdge = Tuple[str, str, int]


def edge_key(u: str, v: str) -> Edge:
    """Canonical (sorted) key of the undirected edge {u, v}."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class CutSet:
    """A set of edges together with its exact product weight."""

    edges: FrozenSet[Edge]
    exact_weight: int

    @property
    def log2_weight(self) -> float:
        return math.log2(self.exact_weight)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], weight: Mapping[Edge, int]) -> "CutSet":
        edges = frozenset(edges)
        return cls(edges, math.prod(weight[e] for e in edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.edges


class NetworkGraph:
    """
    Immutable tensor-network graph.

    The raw form may carry parallel edges, loops, unit-weight edges and free
    (dangling) indices; `simplify` turns it into the simple form every
    downstream operation expects.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[RawEdge] = (),
        free_indices: Optional[Mapping[str, Iterable[int]]] = None,
        members: Optional[Mapping[str, Iterable[str]]] = None,
        unit_bridges: Iterable[Edge] = (),
    ):
        """
        Build a graph.

        Args:
            vertices: Vertex ids
            edges: (u, v, weight) triples, parallels and loops allowed
            free_indices: Dangling bond dimensions per vertex
            members: Original vertices merged into each vertex of a minor
            unit_bridges: Weight-1 edges kept because removing them disconnects

        Raises:
            GraphFormatError: If an edge names an unknown vertex or a weight is not a positive integer
        """
        self._vertices: Tuple[str, ...] = tuple(sorted({str(v) for v in vertices}))
        known = set(self._vertices)
        edge_list: List[RawEdge] = []
        for index, (u, v, w) in enumerate(edges):
            u, v = str(u), str(v)
            if u not in known or v not in known:
                raise GraphFormatError(f"unknown endpoint in {{{u},{v}}}", f"edges[{index}]")
            if isinstance(w, bool) or not isinstance(w, int) or w < 1:
                raise GraphFormatError(f"weight must be a positive integer, got {w!r}", f"edges[{index}].w")
            a, b = edge_key(u, v)
            edge_list.append((a, b, w))
        self._edge_list: Tuple[RawEdge, ...] = tuple(sorted(edge_list))

        self._free: Dict[str, Tuple[int, ...]] = {}
        for v, dims in (free_indices or {}).items():
            dims = tuple(dims)
            if str(v) not in known:
                raise GraphFormatError(f"unknown vertex {v!r}", "free")
            if any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in dims):
                raise GraphFormatError(f"free dimensions must be positive integers, got {dims!r}", f"free[{v}]")
            if dims:
                self._free[str(v)] = dims

        self._members: Dict[str, FrozenSet[str]] = {v: frozenset([v]) for v in self._vertices}
        for v, group in (members or {}).items():
            if v in self._members:
                self._members[v] = frozenset(group)
        self._unit_bridges: FrozenSet[Edge] = frozenset(edge_key(*e) for e in unit_bridges)

        keys = [(u, v) for u, v, _ in self._edge_list]
        self._simple = all(u != v for u, v in keys) and len(set(keys)) == len(keys)
        self._weight: Dict[Edge, int] = {}
        self._adjacency: Dict[str, Dict[str, int]] = {v: {} for v in self._vertices}
        if self._simple:
            for u, v, w in self._edge_list:
                self._weight[(u, v)] = w
                self._adjacency[u][v] = w
                self._adjacency[v][u] = w

    # --- basic views ---

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def edge_list(self) -> Tuple[RawEdge, ...]:
        return self._edge_list

    @property
    def free_indices(self) -> Dict[str, Tuple[int, ...]]:
        return dict(self._free)

    @property
    def unit_bridges(self) -> FrozenSet[Edge]:
        return self._unit_bridges

    @property
    def is_simple(self) -> bool:
        return self._simple

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def weight(self) -> Dict[Edge, int]:
        """Edge → bond dimension map of a simple graph."""
        self._require_simple()
        return self._weight

    @property
    def edges(self) -> List[Edge]:
        self._require_simple()
        return list(self._weight)

    def members(self, v: str) -> FrozenSet[str]:
        """Original vertices merged into `v`."""
        return self._members[v]

    def neighbors(self, v: str) -> Dict[str, int]:
        self._require_simple()
        return self._adjacency[v]

    def incident_edges(self, v: str) -> List[Edge]:
        return [edge_key(v, u) for u in self.neighbors(v)]

    def star_weight(self, v: str) -> int:
        """Product of the bond dimensions at `v` (the size of its tensor)."""
        return math.prod(self.neighbors(v).values())

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._weight

    def total_weight(self) -> int:
        return math.prod(w for _, _, w in self._edge_list)

    def is_connected(self) -> bool:
        if not self._vertices:
            return False
        return nx.is_connected(self.to_networkx())

    def to_networkx(self) -> nx.Graph:
        """Simple networkx view with `weight` attributes, built in sorted order."""
        graph = nx.Graph()
        graph.add_nodes_from(self._vertices)
        for u, v, w in self._edge_list:
            if u == v:
                continue
            if graph.has_edge(u, v):
                graph[u][v]["weight"] *= w
            else:
                graph.add_edge(u, v, weight=w)
        return graph

    def _require_simple(self) -> None:
        if not self._simple:
            raise CarveError("operation needs a simple graph; call simplify() first")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetworkGraph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._edge_list == other._edge_list
            and self._free == other._free
            and self._unit_bridges == other._unit_bridges
            and self._members == other._members
        )

    def __hash__(self) -> int:
        return hash((self._vertices, self._edge_list))

    def __repr__(self) -> str:
        return f"NetworkGraph(n={self.n}, edges={len(self._edge_list)})"


def simplify(g: NetworkGraph) -> NetworkGraph:
    """
    Bring a raw network into simple form.

    Parallel edges are merged into one edge weighted with the product of their
    weights, loops are summed away, free indices are dropped and unit-weight
    edges are removed unless removing them would disconnect the network.

    Raises:
        EmptyGraph: If the graph has no vertices
        DisconnectedGraph: If the graph is not connected
    """
    if g.n == 0:
        raise EmptyGraph("the network has no vertices")
    merged: Dict[Edge, int] = {}
    for u, v, w in g.edge_list:
        if u == v:
            continue
        merged[(u, v)] = merged.get((u, v), 1) * w

    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from(merged)
    if not nx.is_connected(graph):
        raise DisconnectedGraph("the network is not connected")

    bridges = set()
    for key in sorted(e for e, w in merged.items() if w == 1):
        graph.remove_edge(*key)
        if not nx.is_connected(graph):
            graph.add_edge(*key)
            bridges.add(key)
        else:
            del merged[key]

    members = {v: g.members(v) for v in g.vertices}
    return NetworkGraph(g.vertices, [(u, v, w) for (u, v), w in merged.items()], members=members, unit_bridges=bridges)


def _vertex_set(g: NetworkGraph, vertices: Iterable[str]) -> FrozenSet[str]:
    vertices = frozenset(vertices)
    unknown = vertices.difference(g.vertices)
    if unknown:
        raise BadPartition(f"unknown vertices {sorted(unknown)}")
    return vertices


def cut_set(g: NetworkGraph, X: Iterable[str], Y: Iterable[str]) -> CutSet:
    """
    Edges with one endpoint in X and the other in Y.

    Raises:
        OverlappingSets: If X and Y intersect
    """
    X, Y = _vertex_set(g, X), _vertex_set(g, Y)
    if X & Y:
        raise OverlappingSets(f"sets share {sorted(X & Y)}")
    edges = [e for e in g.weight if (e[0] in X and e[1] in Y) or (e[0] in Y and e[1] in X)]
    return CutSet.from_edges(edges, g.weight)


def cut_weight3(g: NetworkGraph, X: Iterable[str], Y: Iterable[str], Z: Iterable[str]) -> CutSet:
    """
    The 3-cut δ(X,Y) ⊎ δ(X,Z) ⊎ δ(Y,Z) of a tripartition of V.

    Raises:
        BadPartition: If the sets overlap or miss vertices
    """
    X, Y, Z = _vertex_set(g, X), _vertex_set(g, Y), _vertex_set(g, Z)
    if X & Y or X & Z or Y & Z or len(X | Y | Z) != g.n:
        raise BadPartition("the three sets must partition the vertex set")
    side = {v: 0 for v in X}
    side.update({v: 1 for v in Y})
    side.update({v: 2 for v in Z})
    return CutSet.from_edges((e for e in g.weight if side[e[0]] != side[e[1]]), g.weight)


def _merged_id(g: NetworkGraph, u: str, v: str, group: FrozenSet[str]) -> str:
    name = "".join(sorted(group))
    if name in g.vertices and name not in (u, v):
        name = "+".join(sorted(group))
    return name


def merge_vertices(g: NetworkGraph, u: str, v: str) -> NetworkGraph:
    """
    Identify two vertices, adjacent or not.

    Parallel bundles are merged by weight product and the loop formed by a
    joining edge is dropped. The new vertex is named by the sorted
    concatenation of its original members.
    """
    if u not in g.vertices or v not in g.vertices or u == v:
        raise NoSuchEdge(f"cannot merge {u!r} and {v!r}")
    group = g.members(u) | g.members(v)
    merged = _merged_id(g, u, v, group)
    rename = {x: x for x in g.vertices}
    rename[u] = rename[v] = merged

    weights: Dict[Edge, int] = {}
    for a, b, w in g.edge_list:
        a, b = rename[a], rename[b]
        if a == b:
            continue
        key = edge_key(a, b)
        weights[key] = weights.get(key, 1) * w

    vertices = [x for x in g.vertices if x not in (u, v)] + [merged]
    members = {x: g.members(x) for x in vertices if x != merged}
    members[merged] = group
    bridges = [e for e in g.unit_bridges if e in weights and weights[e] == 1]
    return NetworkGraph(vertices, [(a, b, w) for (a, b), w in weights.items()], members=members, unit_bridges=bridges)


def contract_edge(g: NetworkGraph, e: Tuple[str, str]) -> NetworkGraph:
    """
    The minor G/e.

    Raises:
        NoSuchEdge: If e is not an edge of g
    """
    u, v = e
    if not g.has_edge(u, v):
        raise NoSuchEdge(f"{{{u},{v}}} is not an edge")
    return merge_vertices(g, u, v)


def is_biconnected(g: NetworkGraph) -> bool:
    """True iff g has no articulation vertex (two vertices: iff they are joined)."""
    if g.n < 2:
        return False
    if g.n == 2:
        u, v = g.vertices
        return g.has_edge(u, v)
    return nx.is_biconnected(g.to_networkx())


def without_unit_edges(g: NetworkGraph) -> NetworkGraph:
    """Copy of a simple graph with every weight-1 edge removed, bridges included."""
    edges = [(u, v, w) for u, v, w in g.edge_list if w != 1]
    return NetworkGraph(g.vertices, edges, members={v: g.members(v) for v in g.vertices})
