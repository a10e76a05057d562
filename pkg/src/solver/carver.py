"""
Optimal-width carvings by repeated edge contraction.

An edge of the current minor is eligible when its load fits the target
width, contracting it keeps the minor 2-connected and the contracted minor
still has carving-width at most the target. Contracting eligible edges down
to two vertices and expanding the merges back into cherries yields a free
contraction tree whose space bottleneck meets the target.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from ..core import reporting
from ..core.ctree import FreeContractionTree, Metrics, Nested, free_from_nested, metrics, root_at
from ..core.embedding import Embedding, contracted_embedding, planar_embedding
from ..core.errors import CarveError, InvariantViolation, NoEligibleEdge
from ..core.netgraph import Edge, NetworkGraph, contract_edge, is_biconnected
from .ratcatcher import DEFAULT_EPS, CarvingWidthSolver, load_within


@dataclass
class ContractionHistory:
    """Minors visited by the edge-contraction search, starting with the input graph."""

    minors: List[NetworkGraph]
    edges: List[Edge] = field(default_factory=list)
    target: float = 0.0
    eps: float = DEFAULT_EPS
    exact_pow2: bool = False

    @property
    def graph(self) -> NetworkGraph:
        return self.minors[0]

    @property
    def final(self) -> NetworkGraph:
        return self.minors[-1]

    def verify(self) -> None:
        """
        Re-check every minor after the fact.

        Raises:
            InvariantViolation: If a minor lost 2-connectivity or exceeds the target width
        """
        keep_biconnected = is_biconnected(self.graph)
        for i, minor in enumerate(self.minors):
            if keep_biconnected and not is_biconnected(minor):
                raise InvariantViolation(f"minor {i} is not 2-connected", {"minor": i, "vertices": list(minor.vertices)})
            solver = CarvingWidthSolver(minor, planar_embedding(minor), self.eps, self.exact_pow2)
            if not solver.within_width(self.target):
                raise InvariantViolation(f"minor {i} is wider than {self.target}", {"minor": i})
        if self.final.n != 2 and self.graph.n >= 2:
            raise InvariantViolation("the history does not end with two vertices")


def _eligible(
    emb: Embedding, e: Edge, target: float, eps: float, exact_pow2: bool, diagnostics: Dict[str, int]
) -> Optional[Embedding]:
    minor = emb.graph
    if not load_within(minor.weight[e], target, eps, exact_pow2):
        diagnostics["load"] += 1
        return None
    candidate = contract_edge(minor, e)
    if is_biconnected(minor) and not is_biconnected(candidate):
        diagnostics["biconnected"] += 1
        return None
    candidate_emb = contracted_embedding(emb, e, candidate)
    if not CarvingWidthSolver(candidate, candidate_emb, eps, exact_pow2).within_width(target):
        diagnostics["width"] += 1
        return None
    return candidate_emb


def eligible(
    minor: NetworkGraph,
    e: Edge,
    target_carw: float,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
    emb: Optional[Embedding] = None,
) -> bool:
    """True iff contracting e fits the load, keeps 2-connectivity and keeps the width within target."""
    counts = {"load": 0, "biconnected": 0, "width": 0}
    return _eligible(emb or planar_embedding(minor), e, target_carw, eps, exact_pow2, counts) is not None


def contract_history(
    g: NetworkGraph,
    emb: Embedding,
    target_carw: float,
    seed: int,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
) -> ContractionHistory:
    """
    Contract eligible edges, picked in a seeded random order, until two vertices remain.

    Every minor inherits its embedding from emb, so planarity is tested once.

    Raises:
        NoEligibleEdge: With per-condition rejection counts when no edge qualifies
    """
    rng = np.random.default_rng(seed)
    history = ContractionHistory([g], target=target_carw, eps=eps, exact_pow2=exact_pow2)
    minor_emb = emb
    while minor_emb.graph.n > 2:
        minor = minor_emb.graph
        edges = sorted(minor.weight)
        diagnostics = {"load": 0, "biconnected": 0, "width": 0}
        chosen = None
        for index in rng.permutation(len(edges)):
            e = edges[int(index)]
            candidate = _eligible(minor_emb, e, target_carw, eps, exact_pow2, diagnostics)
            if candidate is not None:
                chosen = (e, candidate)
                break
        if chosen is None:
            diagnostics.update({"vertices": list(minor.vertices), "target": target_carw, "seed": seed})
            raise NoEligibleEdge(f"no eligible edge in a minor with {minor.n} vertices", diagnostics)
        reporting.log(f"contract {chosen[0]} -> {chosen[1].graph.n} vertices")
        history.edges.append(chosen[0])
        history.minors.append(chosen[1].graph)
        minor_emb = chosen[1]
    return history


def assemble(history: ContractionHistory) -> FreeContractionTree:
    """
    Expand a contraction history into a free tree.

    The last two vertices form the single top arc; every contraction, undone
    backwards, splits the merged leaf into a cherry of its two endpoints.
    """
    g = history.graph
    nested: Dict[FrozenSet[str], Nested] = {frozenset([v]): v for v in g.vertices}
    for minor, (a, b) in zip(history.minors, history.edges):
        left, right = minor.members(a), minor.members(b)
        nested[left | right] = [nested[left], nested[right]]
    final = history.final
    u, v = final.vertices
    return free_from_nested([nested[final.members(u)], nested[final.members(v)]], g)


def decompose(
    g: NetworkGraph,
    emb: Embedding,
    target_carw: float,
    seed: int,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
) -> FreeContractionTree:
    """
    Free contraction tree of width exactly `target_carw`.

    Raises:
        NoEligibleEdge: If the search gets stuck
        InvariantViolation: If the assembled tree misses the target width
    """
    if g.n == 2:
        return free_from_nested(list(g.vertices), g)
    tree = assemble(contract_history(g, emb, target_carw, seed, eps, exact_pow2))
    solver = CarvingWidthSolver(g, emb, eps, exact_pow2)
    width = solver.width_of(tree)
    if abs(width - target_carw) > (0 if solver.exact else 2 * eps):
        raise InvariantViolation(
            f"assembled tree has width {width}, expected {target_carw}", {"width": width, "target": target_carw, "seed": seed}
        )
    return tree


def rooted_ct(t: FreeContractionTree) -> int:
    """Total time once rooted on the lightest arc."""
    lightest = min(t.arcs, key=lambda a: (t.arc_label(a).exact_weight, a))
    return metrics(root_at(t, lightest)).ct


@dataclass
class _Run:
    index: int
    tree: FreeContractionTree
    metrics: Metrics
    rooted_ct: int


def best_of(
    g: NetworkGraph,
    emb: Embedding,
    n_runs: int,
    seed: int,
    target_carw: Optional[float] = None,
    workers: int = 1,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
) -> Tuple[FreeContractionTree, Metrics]:
    """
    Keep the cheapest of `n_runs` seeded decompositions.

    Run i uses seed + i. Trees are ranked by optimally-rooted Ct, then Bt,
    then run index, so the answer does not depend on completion order.
    """
    if n_runs < 1:
        raise CarveError("n_runs must be at least 1")
    if target_carw is None:
        target_carw = CarvingWidthSolver(g, emb, eps, exact_pow2).carving_width().carw

    def run(i: int) -> _Run:
        tree = decompose(g, emb, target_carw, seed + i, eps, exact_pow2)
        return _Run(i, tree, metrics(tree), rooted_ct(tree))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, range(n_runs)))
    else:
        runs = [run(i) for i in range(n_runs)]
    best = min(runs, key=lambda r: (r.rooted_ct, r.metrics.bt, r.index))
    reporting.log(f"best of {n_runs}: run {best.index}, Ct {best.rooted_ct}")
    return best.tree, best.metrics
