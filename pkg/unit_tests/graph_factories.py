"""Small graphs shared by the test modules."""

from itertools import combinations

import networkx as nx
import numpy as np

from src.core.ctree import free_from_nested
from src.core.netgraph import NetworkGraph


def single_edge(w=8):
    return NetworkGraph(["A", "B"], [("A", "B", w)])


def path_abc():
    return NetworkGraph(["A", "B", "C"], [("A", "B", 2), ("B", "C", 3)])


def triangle():
    return NetworkGraph(["A", "B", "C"], [("A", "B", 2), ("B", "C", 3), ("A", "C", 4)])


def cycle(k, w=2):
    names = [chr(ord("A") + i) for i in range(k)]
    return NetworkGraph(names, [(names[i], names[(i + 1) % k], w) for i in range(k)])


def grid_2x3(w=2):
    """Top row A-B-C, bottom row D-E-F."""
    edges = [("A", "B"), ("B", "C"), ("A", "D"), ("B", "E"), ("C", "F"), ("D", "E"), ("E", "F")]
    return NetworkGraph("ABCDEF", [(u, v, w) for u, v in edges])


def grid(rows, cols, w=2):
    names = {(r, c): f"{r}{c}" for r in range(rows) for c in range(cols)}
    edges = []
    for (r, c), name in names.items():
        if c + 1 < cols:
            edges.append((name, names[(r, c + 1)], w))
        if r + 1 < rows:
            edges.append((name, names[(r + 1, c)], w))
    return NetworkGraph(names.values(), edges)


def k5():
    names = "ABCDE"
    return NetworkGraph(names, [(u, v, 2) for u, v in combinations(names, 2)])


def random_planar(rng, n, weights=(2, 4, 8), biconnected=True, extra=None):
    """Random connected planar graph: a cycle (or a random tree) plus chords kept while planar."""
    names = [f"v{i:02d}" for i in range(n)]
    graph = nx.Graph()
    graph.add_nodes_from(names)
    if n == 2:
        graph.add_edge(names[0], names[1])
    elif biconnected:
        graph.add_edges_from((names[i], names[(i + 1) % n]) for i in range(n))
    else:
        for i in range(1, n):
            graph.add_edge(names[i], names[int(rng.integers(0, i))])
    missing = [pair for pair in combinations(names, 2) if not graph.has_edge(*pair)]
    budget = int(rng.integers(0, len(missing) + 1)) if extra is None else extra
    for index in rng.permutation(len(missing)):
        if budget <= 0:
            break
        u, v = missing[index]
        graph.add_edge(u, v)
        if nx.check_planarity(graph)[0]:
            budget -= 1
        else:
            graph.remove_edge(u, v)
    return NetworkGraph(names, [(u, v, int(rng.choice(weights))) for u, v in sorted(graph.edges())])


def rng(seed=0):
    return np.random.default_rng(seed)


def random_free_tree(g, generator):
    """Random full binary tree over g's vertices, built by inserting leaves at random positions."""
    order = list(g.vertices)
    nested = [order[0], order[1]]
    for v in order[2:]:
        nested = _insert(nested, v, generator)
    return free_from_nested(nested, g)


def _insert(nested, v, generator):
    if isinstance(nested, str) or generator.random() < 0.3:
        return [nested, v]
    index = int(generator.integers(0, 2))
    copy = list(nested)
    copy[index] = _insert(copy[index], v, generator)
    return copy


def star(m, w=2):
    leaves = [f"L{i:02d}" for i in range(m)]
    return NetworkGraph(["C"] + leaves, [("C", leaf, w) for leaf in leaves])


def bowtie():
    """Triangles A-B-C and C-D-E sharing the cut vertex C."""
    edges = [("A", "B", 4), ("B", "C", 2), ("A", "C", 2), ("C", "D", 8), ("D", "E", 2), ("C", "E", 4)]
    return NetworkGraph("ABCDE", edges)
