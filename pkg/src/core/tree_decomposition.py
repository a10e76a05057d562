"""
Tree-decompositions of a network's line graph and their conversion to and
from free contraction trees.
"""

import math
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set

from .ctree import FreeContractionTree
from .errors import InvalidDecomposition
from .netgraph import Edge, NetworkGraph, edge_key


class TreeDecomposition:
    """A tree whose nodes carry bags of graph edges."""

    def __init__(self, graph: NetworkGraph, adjacency: Mapping[int, Iterable[int]], bags: Mapping[int, Iterable[Edge]]):
        self.graph = graph
        self.adjacency: Dict[int, FrozenSet[int]] = {int(k): frozenset(v) for k, v in adjacency.items()}
        self.bags: Dict[int, FrozenSet[Edge]] = {int(k): frozenset(edge_key(*e) for e in v) for k, v in bags.items()}

    @property
    def weighted_width(self) -> int:
        """Largest bag weight (product of bond dimensions in the bag)."""
        weight = self.graph.weight
        return max(math.prod(weight[e] for e in bag) for bag in self.bags.values())

    def nodes_containing(self, e: Edge) -> Set[int]:
        return {node for node, bag in self.bags.items() if e in bag}

    def validate(self) -> None:
        """
        Check the tree shape and the three decomposition properties.

        Raises:
            InvalidDecomposition: Naming the first property that fails
        """
        nodes = set(self.adjacency)
        if not nodes or nodes != set(self.bags):
            raise InvalidDecomposition("every tree node needs exactly one bag")
        for node, nbrs in self.adjacency.items():
            for other in nbrs:
                if other not in self.adjacency or node not in self.adjacency[other]:
                    raise InvalidDecomposition(f"arc {node}-{other} is not symmetric")
        arc_count = sum(len(v) for v in self.adjacency.values()) // 2
        if arc_count != len(nodes) - 1 or len(_component(self.adjacency, min(nodes), nodes)) != len(nodes):
            raise InvalidDecomposition("the decomposition is not a tree")

        edges = set(self.graph.weight)
        for node, bag in self.bags.items():
            if bag - edges:
                raise InvalidDecomposition(f"bag {node} holds edges outside the graph")
        for e in sorted(edges):
            if not self.nodes_containing(e):
                raise InvalidDecomposition(f"property 1: edge {e} is in no bag")
        for v in self.graph.vertices:
            for e, f in combinations(sorted(self.graph.incident_edges(v)), 2):
                if not any(e in bag and f in bag for bag in self.bags.values()):
                    raise InvalidDecomposition(f"property 2: edges {e} and {f} share {v!r} but no bag")
        for e in sorted(edges):
            holders = self.nodes_containing(e)
            if len(_component(self.adjacency, min(holders), holders)) != len(holders):
                raise InvalidDecomposition(f"property 3: bags holding {e} are not connected")

    def __repr__(self) -> str:
        return f"TreeDecomposition(nodes={len(self.bags)})"


def _component(adjacency: Mapping[int, Iterable[int]], start: int, allowed: Set[int]) -> Set[int]:
    seen, stack = {start}, [start]
    while stack:
        node = stack.pop()
        for other in adjacency[node]:
            if other in allowed and other not in seen:
                seen.add(other)
                stack.append(other)
    return seen


def to_tree_decomposition(t: FreeContractionTree) -> TreeDecomposition:
    """
    Bags are the internal node labels; leaves are stripped.

    A 2-leaf tree becomes a single bag holding its only arc label.
    """
    internal = t.internal_nodes
    if not internal:
        return TreeDecomposition(t.graph, {0: []}, {0: t.arc_label(t.arcs[0]).edges})
    kept = set(internal)
    adjacency = {node: [x for x in t.neighbors(node) if x in kept] for node in internal}
    bags = {node: t.node_label(node).edges for node in internal}
    return TreeDecomposition(t.graph, adjacency, bags)


def from_tree_decomposition(td: TreeDecomposition, g: NetworkGraph) -> FreeContractionTree:
    """
    Turn a tree-decomposition of the line graph into a free contraction tree no wider than it.

    Every vertex becomes a leaf hung on the lowest-numbered bag containing all
    of its edges. Bag nodes that end up off every leaf-to-leaf path are pruned,
    degree-2 nodes are spliced out and nodes of degree above three are split
    by repeatedly pulling off the pair of branches whose joint label is lightest.

    Raises:
        InvalidDecomposition: If td is not a tree-decomposition of g's line graph
    """
    td.validate()
    adjacency: Dict[int, Set[int]] = {node: set(nbrs) for node, nbrs in td.adjacency.items()}
    next_id = max(adjacency) + 1
    leaves: Dict[int, str] = {}
    for v in g.vertices:
        needed = set(g.incident_edges(v))
        hosts = [node for node in sorted(td.bags) if needed <= td.bags[node]]
        if not hosts:
            raise InvalidDecomposition(f"no bag holds every edge at {v!r}")
        leaves[next_id] = v
        adjacency[next_id] = {hosts[0]}
        adjacency[hosts[0]].add(next_id)
        next_id += 1

    changed = True
    while changed:
        changed = False
        for node in sorted(adjacency):
            if node in leaves or node not in adjacency:
                continue
            nbrs = adjacency[node]
            if len(nbrs) <= 1:
                for other in nbrs:
                    adjacency[other].discard(node)
                del adjacency[node]
                changed = True
            elif len(nbrs) == 2:
                a, b = nbrs
                adjacency[a].discard(node)
                adjacency[b].discard(node)
                adjacency[a].add(b)
                adjacency[b].add(a)
                del adjacency[node]
                changed = True

    weight = g.weight

    def branch(node: int, start: int) -> FrozenSet[str]:
        found, seen, stack = set(), {node, start}, [start]
        while stack:
            current = stack.pop()
            if current in leaves:
                found.add(leaves[current])
            for other in adjacency[current]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return frozenset(found)

    def cut(side: FrozenSet[str]) -> Set[Edge]:
        return {e for e in weight if (e[0] in side) != (e[1] in side)}

    for node in sorted(adjacency):
        while len(adjacency[node]) > 3:
            cuts = {other: cut(branch(node, other)) for other in adjacency[node]}

            def pair_cost(pair) -> tuple:
                return math.prod(weight[e] for e in cuts[pair[0]] | cuts[pair[1]]), pair

            i, j = min(combinations(sorted(adjacency[node]), 2), key=pair_cost)
            new = next_id
            next_id += 1
            for other in (i, j):
                adjacency[node].discard(other)
                adjacency[other].discard(node)
                adjacency[other].add(new)
            adjacency[new] = {i, j, node}
            adjacency[node].add(new)

    return FreeContractionTree(g, adjacency, leaves)


def edge_paths_are_paths(t: FreeContractionTree) -> List[Edge]:
    """Edges whose label-holding nodes fail to induce a path; empty for a valid labeling."""
    bad = []
    for e in sorted(t.graph.weight):
        holders = {t.leaf_node(e[0]), t.leaf_node(e[1])}
        holders |= {node for node in t.internal_nodes if e in t.node_label(node)}
        degrees = [sum(1 for x in t.neighbors(node) if x in holders) for node in holders]
        connected = len(_component(t.adjacency, min(holders), holders)) == len(holders)
        if not connected or max(degrees) > 2:
            bad.append(e)
    return bad
