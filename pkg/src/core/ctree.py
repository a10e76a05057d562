"""
Contraction trees.

A free contraction tree is a full binary tree whose leaves are the vertices
of a network graph. Every arc is labeled with the cut it induces on the
leaves and every internal node with the 3-cut of its three branches. A
rooted tree adds a degree-2 root subdividing one arc and fixes a
contraction order.
"""

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BadLeafMap, BadShape, InvariantViolation, NoSuchArc
from .netgraph import CutSet, Edge, NetworkGraph

Arc = Tuple[int, int]
Nested = Union[str, Sequence["Nested"]]


def arc_key(a: int, b: int) -> Arc:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Metrics:
    """Space bottleneck, time bottleneck and total time of a contraction tree."""

    n: int
    bs: int
    bt: int
    ct: int
    rooted: bool = False

    @property
    def log2_bs(self) -> float:
        return math.log2(self.bs)

    @property
    def log2_bt(self) -> float:
        return math.log2(self.bt)

    @property
    def log2_ct(self) -> float:
        return math.log2(self.ct)

    def bound_violations(self) -> List[str]:
        """
        Check the inequalities tying Bs, Bt and Ct together.

        Returns:
            A list of human-readable violations, empty when all bounds hold
        """
        problems = []
        if not self.bs <= self.bt <= self.ct:
            problems.append(f"expected Bs <= Bt <= Ct, got {self.bs}, {self.bt}, {self.ct}")
        if self.bt ** 2 > self.bs ** 3:
            problems.append(f"log2 Bt exceeds 1.5 log2 Bs ({self.bt}, {self.bs})")
        if not self.rooted and self.n >= 3:
            if self.bt + 4 * (self.n - 3) > self.ct:
                problems.append(f"Bt + 4(n-3) > Ct ({self.bt}, {self.n}, {self.ct})")
            if self.ct > (self.n - 2) * self.bt:
                problems.append(f"Ct > (n-2) Bt ({self.ct}, {self.n}, {self.bt})")
        return problems

    def check_bounds(self) -> None:
        problems = self.bound_violations()
        if problems:
            raise InvariantViolation("; ".join(problems), {"metrics": self.as_dict()})

    def as_dict(self) -> Dict[str, object]:
        """JSON-friendly view; exact integers as decimal strings."""
        return {
            "n": self.n,
            "bs": str(self.bs),
            "bt": str(self.bt),
            "ct": str(self.ct),
            "log2_bs": self.log2_bs,
            "log2_bt": self.log2_bt,
            "log2_ct": self.log2_ct,
            "rooted": self.rooted,
        }


class ContractionTree:
    """Shape validation and cut labeling shared by free and rooted trees."""

    def __init__(
        self,
        graph: NetworkGraph,
        adjacency: Mapping[int, Iterable[int]],
        leaves: Mapping[int, str],
        root: Optional[int] = None,
    ):
        self.graph = graph
        self._adjacency: Dict[int, Tuple[int, ...]] = {
            int(node): tuple(sorted(int(x) for x in nbrs)) for node, nbrs in adjacency.items()
        }
        self._leaves: Dict[int, str] = {int(node): str(v) for node, v in leaves.items()}
        self.root = root
        self._check_shape()
        self._leaf_node = {v: node for node, v in self._leaves.items()}
        self._label()

    # --- validation ---

    def _check_shape(self) -> None:
        adjacency = self._adjacency
        if self.graph.n < 2:
            raise BadShape("a contraction tree needs at least two leaves")
        for node, nbrs in adjacency.items():
            if node in nbrs or len(set(nbrs)) != len(nbrs):
                raise BadShape(f"node {node} has a loop or a repeated neighbour")
            for other in nbrs:
                if node not in adjacency.get(other, ()):
                    raise BadShape(f"arc {node}-{other} is not symmetric")
        arc_count = sum(len(nbrs) for nbrs in adjacency.values()) // 2
        if arc_count != len(adjacency) - 1 or len(self._reachable(min(adjacency))) != len(adjacency):
            raise BadShape("the shape is not a tree")

        if set(self._leaves) - set(adjacency):
            raise BadLeafMap("leaf map names nodes outside the tree")
        images = list(self._leaves.values())
        if len(set(images)) != len(images) or sorted(images) != list(self.graph.vertices):
            raise BadLeafMap("leaves do not biject onto the graph's vertices")

        if self.root is not None and (self.root not in adjacency or self.root in self._leaves):
            raise BadShape(f"root {self.root} must be an internal node of the tree")
        for node, nbrs in adjacency.items():
            if node in self._leaves:
                expected = 1
            elif node == self.root:
                expected = 2
            else:
                expected = 3
            if len(nbrs) != expected:
                raise BadShape(f"node {node} has degree {len(nbrs)}, expected {expected}")

    def _reachable(self, start: int) -> List[int]:
        order, seen, stack = [], {start}, [start]
        while stack:
            node = stack.pop()
            order.append(node)
            for other in self._adjacency.get(node, ()):
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return order

    # --- labeling ---

    def _label(self) -> None:
        start = self.root if self.root is not None else min(self._adjacency)
        parent: Dict[int, Optional[int]] = {start: None}
        order = [start]
        for node in order:
            for other in self._adjacency[node]:
                if other not in parent:
                    parent[other] = node
                    order.append(other)

        below: Dict[int, FrozenSet[str]] = {}
        for node in reversed(order):
            own = {self._leaves[node]} if node in self._leaves else set()
            below[node] = frozenset(own.union(*(below[c] for c in self._adjacency[node] if parent.get(c) == node)))
        self._parent = parent
        self._below = below
        self._all = frozenset(self.graph.vertices)

        weight = self.graph.weight
        self._arc_labels: Dict[Arc, CutSet] = {}
        self._lower: Dict[Arc, int] = {}
        for node, up in parent.items():
            if up is None:
                continue
            side = below[node]
            arc = arc_key(up, node)
            self._lower[arc] = node
            self._arc_labels[arc] = CutSet.from_edges(
                (e for e in weight if (e[0] in side) != (e[1] in side)), weight
            )

        self._node_labels: Dict[int, CutSet] = {}
        for node in self.internal_nodes:
            edges = set()
            for other in self._adjacency[node]:
                edges |= self._arc_labels[arc_key(node, other)].edges
            self._node_labels[node] = CutSet.from_edges(edges, weight)

    # --- views ---

    @property
    def nodes(self) -> List[int]:
        return sorted(self._adjacency)

    @property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self._adjacency)

    @property
    def leaves(self) -> Dict[int, str]:
        return dict(self._leaves)

    @property
    def internal_nodes(self) -> List[int]:
        return [node for node in sorted(self._adjacency) if node not in self._leaves]

    @property
    def arcs(self) -> List[Arc]:
        return sorted(self._arc_labels)

    def neighbors(self, node: int) -> Tuple[int, ...]:
        return self._adjacency[node]

    def leaf_node(self, vertex: str) -> int:
        return self._leaf_node[vertex]

    def arc_label(self, arc: Arc) -> CutSet:
        try:
            return self._arc_labels[arc_key(*arc)]
        except KeyError:
            raise NoSuchArc(f"{arc} is not an arc of the tree") from None

    def node_label(self, node: int) -> CutSet:
        return self._node_labels[node]

    def side(self, arc: Arc, node: int) -> FrozenSet[str]:
        """Vertices on `node`'s side of `arc`."""
        key = arc_key(*arc)
        if key not in self._lower or node not in key:
            raise NoSuchArc(f"{arc} is not an arc at node {node}")
        lower = self._lower[key]
        return self._below[lower] if node == lower else self._all - self._below[lower]

    def splits(self) -> FrozenSet[FrozenSet[str]]:
        """Canonical set of leaf bipartitions, one per arc (the side without the smallest vertex)."""
        anchor = self.graph.vertices[0]
        result = set()
        for lower in self._lower.values():
            side = self._below[lower]
            result.add(side if anchor not in side else self._all - side)
        return frozenset(result)

    def metrics(self) -> Metrics:
        return metrics(self)


class FreeContractionTree(ContractionTree):
    """Unrooted contraction tree: n leaves, n-2 internal nodes of degree 3."""

    def __init__(self, graph: NetworkGraph, adjacency: Mapping[int, Iterable[int]], leaves: Mapping[int, str]):
        super().__init__(graph, adjacency, leaves, root=None)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeContractionTree):
            return NotImplemented
        return self.graph.vertices == other.graph.vertices and self.splits() == other.splits()

    __hash__ = None

    def __repr__(self) -> str:
        return f"FreeContractionTree(n={self.graph.n})"


class RootedContractionTree(ContractionTree):
    """Contraction tree with a degree-2 root; children are ordered by their smallest vertex id."""

    def __init__(
        self, graph: NetworkGraph, adjacency: Mapping[int, Iterable[int]], leaves: Mapping[int, str], root: int
    ):
        super().__init__(graph, adjacency, leaves, root=root)

    def parent(self, node: int) -> Optional[int]:
        return self._parent[node]

    def children(self, node: int) -> List[int]:
        kids = [c for c in self._adjacency[node] if self._parent.get(c) == node]
        return sorted(kids, key=lambda c: min(self._below[c]))

    def subtree(self, node: int) -> FrozenSet[str]:
        """Vertices at the leaves below `node`."""
        return self._below[node]

    def is_leaf(self, node: int) -> bool:
        return node in self._leaves

    def upper_arc_weight(self, node: int) -> int:
        """Weight of the arc above `node`; 1 for the root."""
        up = self._parent[node]
        return 1 if up is None else self._arc_labels[arc_key(up, node)].exact_weight

    def postorder(self) -> List[int]:
        """Internal-and-leaf nodes in left-first post-order."""
        order, stack = [], [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded or node in self._leaves:
                order.append(node)
                continue
            stack.append((node, True))
            for child in reversed(self.children(node)):
                stack.append((child, False))
        return order

    def heap_labels(self) -> Dict[int, int]:
        """
        Step ids with the max-heap property.

        Leaves get 1..n in vertex order and internal nodes n+1..2n-1 in
        post-order, so every node outranks both of its children.
        """
        labels = {self._leaf_node[v]: i + 1 for i, v in enumerate(self.graph.vertices)}
        position = self.graph.n
        for node in self.postorder():
            if node not in self._leaves:
                position += 1
                labels[node] = position
        return labels

    def to_nested(self) -> Nested:
        def build(node: int) -> Nested:
            if node in self._leaves:
                return self._leaves[node]
            return [build(child) for child in self.children(node)]

        return build(self.root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedContractionTree):
            return NotImplemented
        mine = frozenset(self.subtree(c) for c in self.children(self.root))
        theirs = frozenset(other.subtree(c) for c in other.children(other.root))
        return self.graph.vertices == other.graph.vertices and self.splits() == other.splits() and mine == theirs

    __hash__ = None

    def __repr__(self) -> str:
        return f"RootedContractionTree(n={self.graph.n}, root={self.root})"


def label_tree(
    adjacency: Mapping[int, Iterable[int]],
    leaves: Mapping[int, str],
    g: NetworkGraph,
    root: Optional[int] = None,
) -> Union[FreeContractionTree, RootedContractionTree]:
    """
    Validate a tree shape against a graph and compute its cut labels.

    Args:
        adjacency: Node → neighbouring nodes
        leaves: Leaf node → graph vertex
        g: Simple network graph
        root: Degree-2 root node for a rooted shape

    Returns:
        A labeled free tree, or a rooted one when `root` is given

    Raises:
        BadShape: If a degree rule is broken or the shape is not a tree
        BadLeafMap: If the leaves do not biject onto V(g)
    """
    if root is None:
        return FreeContractionTree(g, adjacency, leaves)
    return RootedContractionTree(g, adjacency, leaves, root)


def metrics(t: ContractionTree) -> Metrics:
    """Bs, Bt and Ct of a labeled tree; a 2-leaf free tree reports its single arc for Bt and Ct."""
    bs = max(label.exact_weight for label in t._arc_labels.values())
    weights = [t.node_label(node).exact_weight for node in t.internal_nodes]
    if not weights:
        weights = [bs]
    return Metrics(n=t.graph.n, bs=bs, bt=max(weights), ct=sum(weights), rooted=t.root is not None)


def root_at(t: FreeContractionTree, arc: Arc) -> RootedContractionTree:
    """
    Subdivide `arc` with a new root node.

    Raises:
        NoSuchArc: If `arc` is not in the tree
    """
    a, b = arc_key(*arc)
    if (a, b) not in t.arcs:
        raise NoSuchArc(f"{arc} is not an arc of the tree")
    new_root = max(t.nodes) + 1
    adjacency = {node: [x for x in nbrs] for node, nbrs in t.adjacency.items()}
    adjacency[a] = [new_root if x == b else x for x in adjacency[a]]
    adjacency[b] = [new_root if x == a else x for x in adjacency[b]]
    adjacency[new_root] = [a, b]
    return RootedContractionTree(t.graph, adjacency, t.leaves, new_root)


def unroot(t: RootedContractionTree) -> FreeContractionTree:
    """Remove the root and splice its two arcs into one."""
    a, b = t.neighbors(t.root)
    adjacency = {node: list(nbrs) for node, nbrs in t.adjacency.items() if node != t.root}
    adjacency[a] = [b if x == t.root else x for x in adjacency[a]]
    adjacency[b] = [a if x == t.root else x for x in adjacency[b]]
    return FreeContractionTree(t.graph, adjacency, t.leaves)


def from_nested(nested: Nested, g: NetworkGraph) -> RootedContractionTree:
    """
    Build a rooted tree from nested pairs, e.g. ``[["A", "B"], "C"]``.

    Raises:
        BadShape: If an inner entry does not have exactly two children
    """
    adjacency: Dict[int, List[int]] = {}
    leaves: Dict[int, str] = {}

    def build(item: Nested) -> int:
        node = len(adjacency)
        adjacency[node] = []
        if isinstance(item, str):
            leaves[node] = item
            return node
        if len(item) != 2:
            raise BadShape(f"inner nodes need exactly two children, got {len(item)}")
        for child_item in item:
            child = build(child_item)
            adjacency[node].append(child)
            adjacency[child].append(node)
        return node

    if isinstance(nested, str):
        raise BadShape("a contraction tree needs at least two leaves")
    root = build(nested)
    return RootedContractionTree(g, adjacency, leaves, root)


def free_from_nested(nested: Nested, g: NetworkGraph) -> FreeContractionTree:
    return unroot(from_nested(nested, g))


def node_weight_identity_check(t: ContractionTree) -> bool:
    """True iff every degree-3 node satisfies w(n)^2 = w(a)·w(a')·w(a'') over its three arcs."""
    for node in t.internal_nodes:
        nbrs = t.neighbors(node)
        if len(nbrs) != 3:
            continue
        product = math.prod(t.arc_label((node, other)).exact_weight for other in nbrs)
        if t.node_label(node).exact_weight ** 2 != product:
            return False
    return True


def edge_nodes(t: ContractionTree, e: Edge) -> List[int]:
    """Tree nodes (leaves included) whose label contains edge e."""
    found = [t.leaf_node(e[0]), t.leaf_node(e[1])]
    found += [node for node in t.internal_nodes if e in t.node_label(node)]
    return sorted(found)
