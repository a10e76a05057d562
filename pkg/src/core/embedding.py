"""
Planar embeddings as rotation systems, with face tracing and the dual graph.
"""

from typing import Dict, Iterable, List, Mapping, Tuple

import networkx as nx

from .errors import NotPlanar, NotPlanarEmbedding
from .netgraph import Edge, NetworkGraph, edge_key

Dart = Tuple[str, str]


class Embedding:
    """
    A combinatorial embedding: for every vertex, its neighbours in clockwise order.

    Faces are traced once at construction and checked against Euler's
    formula, so an Embedding that exists is a planar one.
    """

    def __init__(self, graph: NetworkGraph, rotation: Mapping[str, Iterable[str]]):
        """
        Args:
            graph: Simple connected graph
            rotation: Vertex → clockwise list of neighbours

        Raises:
            NotPlanarEmbedding: If the rotation does not match the graph or has genus > 0
        """
        self.graph = graph
        self.rotation: Dict[str, List[str]] = {v: list(rotation.get(v, ())) for v in graph.vertices}
        if set(rotation) - set(graph.vertices):
            raise NotPlanarEmbedding("rotation names vertices outside the graph")
        self._position: Dict[str, Dict[str, int]] = {}
        for v, around in self.rotation.items():
            if len(set(around)) != len(around) or set(around) != set(graph.neighbors(v)):
                raise NotPlanarEmbedding(f"rotation at {v!r} does not list its neighbours exactly once")
            self._position[v] = {u: i for i, u in enumerate(around)}
        self.faces: List[Tuple[Dart, ...]] = self._trace_faces()
        self._face_of: Dict[Dart, int] = {d: f for f, darts in enumerate(self.faces) for d in darts}
        if graph.n - len(graph.weight) + len(self.faces) != 2:
            raise NotPlanarEmbedding(
                f"Euler check failed: V={graph.n} E={len(graph.weight)} F={len(self.faces)}"
            )

    def next_dart(self, dart: Dart) -> Dart:
        """The dart following `dart` along the boundary of its face."""
        u, v = dart
        around = self.rotation[v]
        return v, around[(self._position[v][u] + 1) % len(around)]

    def _trace_faces(self) -> List[Tuple[Dart, ...]]:
        if not self.graph.weight:
            return [()]
        seen = set()
        faces = []
        darts = sorted(d for u, v in self.graph.weight for d in ((u, v), (v, u)))
        for start in darts:
            if start in seen:
                continue
            face = []
            dart = start
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                dart = self.next_dart(dart)
            faces.append(tuple(face))
        return faces

    def face_of(self, dart: Dart) -> int:
        return self._face_of[dart]

    def edge_faces(self, e: Edge) -> Tuple[int, int]:
        """The two faces on either side of an edge (equal for a bridge)."""
        u, v = e
        return self._face_of[(u, v)], self._face_of[(v, u)]

    def dual(self) -> Dict[int, List[Tuple[int, Edge]]]:
        """
        Dual multigraph as an adjacency list: face → [(neighbouring face, primal edge)].

        A bridge shows up as a loop listed once.
        """
        adjacency: Dict[int, List[Tuple[int, Edge]]] = {f: [] for f in range(len(self.faces))}
        for e in sorted(self.graph.weight):
            f, h = self.edge_faces(e)
            adjacency[f].append((h, e))
            if f != h:
                adjacency[h].append((f, e))
        return adjacency

    def __repr__(self) -> str:
        return f"Embedding(n={self.graph.n}, faces={len(self.faces)})"


def planar_embedding(g: NetworkGraph) -> Embedding:
    """
    Compute a planar embedding of a simple graph.

    Vertices and edges are handed to the planarity test in sorted order so
    the result is deterministic.

    Raises:
        NotPlanar: With a Kuratowski subgraph as witness
    """
    is_planar, certificate = nx.check_planarity(g.to_networkx(), counterexample=True)
    if not is_planar:
        witness = sorted(edge_key(u, v) for u, v in certificate.edges())
        raise NotPlanar(f"graph is not planar (Kuratowski witness with {len(witness)} edges)", witness)
    rotation = {v: list(certificate.neighbors_cw_order(v)) if g.neighbors(v) else [] for v in g.vertices}
    return Embedding(g, rotation)


def embedding_from_rotation(g: NetworkGraph, rotation: Mapping[str, Iterable[str]]) -> Embedding:
    """
    Restrict a rotation given for a raw network to its simplified form.

    Neighbours that are no longer adjacent are dropped and repeated ones
    (merged parallels) keep their first position. Deleting edges keeps an
    embedding planar.
    """
    restricted = {}
    for v in g.vertices:
        around: List[str] = []
        for u in rotation.get(v, ()):
            if g.has_edge(v, u) and u not in around:
                around.append(u)
        restricted[v] = around
    return Embedding(g, restricted)


def contracted_embedding(emb: Embedding, e: Edge, minor: NetworkGraph) -> Embedding:
    """
    Embedding of minor = G/e inherited from an embedding of G.

    The merged vertex lists u's neighbours clockwise from just after v, then
    v's from just after u. Of two edges that become parallel the one from u
    is kept and the one from v is deleted at both of its ends.
    """
    u, v = e
    g = emb.graph
    group = g.members(u) | g.members(v)
    merged = next(x for x in minor.vertices if minor.members(x) == group)

    def after(x: str, y: str) -> List[str]:
        around = emb.rotation[x]
        i = around.index(y)
        return around[i + 1:] + around[:i]

    from_u = after(u, v)
    shared = set(from_u)
    rotation = {merged: from_u + [x for x in after(v, u) if x not in shared]}
    for x in g.vertices:
        if x in (u, v):
            continue
        rotation[x] = [merged if y in (u, v) else y for y in emb.rotation[x] if not (y == v and x in shared)]
    return Embedding(minor, rotation)
