"""
End-to-end contraction ordering of one network file.

simplify -> embed -> carving-width -> best of N carvings -> optimal root
-> contraction sequence, with every artifact written and read back.
"""

import os
import time
from dataclasses import dataclass, field
from typing import Dict, Optional

from ..core import reporting
from ..core.ctree import Metrics, RootedContractionTree, metrics
from ..core.embedding import Embedding, embedding_from_rotation, planar_embedding
from ..core.errors import InvariantViolation
from ..core.graph_io import Rotation, load_graph, load_tree, read_json, save_tree, write_json
from ..core.netgraph import NetworkGraph, simplify
from ..solver.carver import best_of
from ..solver.ratcatcher import DEFAULT_EPS, CarvingWidthResult, CarvingWidthSolver, carving_width
from ..solver.sequencer import ContractionSequence, optimal_root, sequence, sequence_from_dict
from .netgen import stream_seed

DEFAULT_RUNS = 10
TREE_NAME = "tree.json"
SEQUENCE_NAME = "sequence.json"


@dataclass
class Solution:
    """Everything one ordering run produces for a simple graph."""

    graph: NetworkGraph
    embedding: Embedding
    width: CarvingWidthResult
    tree: RootedContractionTree
    free_metrics: Metrics
    sequence: ContractionSequence
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def ct(self) -> int:
        return self.sequence.ct


@dataclass
class PipelineResult:
    tree_path: str
    sequence_path: str
    solution: Solution

    @property
    def metrics(self) -> Metrics:
        return metrics(self.solution.tree)

    @property
    def timings(self) -> Dict[str, float]:
        return self.solution.timings

    def summary(self) -> Dict[str, object]:
        return {
            "tree": self.tree_path,
            "sequence": self.sequence_path,
            "carw": self.solution.width.carw,
            "metrics": self.metrics.as_dict(),
            "cs_alg1": str(self.solution.sequence.cs_alg1),
            "peak": str(self.solution.sequence.peak),
            "timings": self.timings,
        }


def embed(g: NetworkGraph, rotation: Optional[Rotation]) -> Embedding:
    """Use the supplied rotation system when there is one, else compute an embedding."""
    return embedding_from_rotation(g, rotation) if rotation is not None else planar_embedding(g)


def solve(
    g: NetworkGraph,
    emb: Embedding,
    n_runs: int = DEFAULT_RUNS,
    seed: int = 0,
    workers: int = 1,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
) -> Solution:
    """
    Order the contraction of a simple embedded graph.

    Args:
        g: Simple network graph
        emb: Planar embedding of g
        n_runs: Number of seeded carvings to choose from
        seed: Carver seed; run i uses seed + i
        workers: Thread count for the carvings
        eps: Float tolerance of width comparisons
        exact_pow2: Compare integer exponents when every weight is a power of two

    Returns:
        The solution with per-phase timings in seconds
    """
    timings = {}
    started = time.perf_counter()
    width = carving_width(g, emb, eps, exact_pow2)
    timings["width"] = time.perf_counter() - started

    started = time.perf_counter()
    free, free_metrics = best_of(g, emb, n_runs, seed, width.carw, workers, eps, exact_pow2)
    timings["carve"] = time.perf_counter() - started

    started = time.perf_counter()
    rooted = optimal_root(free)
    seq = sequence(rooted)
    timings["sequence"] = time.perf_counter() - started
    return Solution(g, emb, width, rooted, free_metrics, seq, timings)


def validate(solution: Solution, tree_path: str, sequence_path: str, eps: float = DEFAULT_EPS, exact_pow2: bool = False) -> None:
    """
    Read the written artifacts back and re-check them.

    Raises:
        InvariantViolation: If a file differs from what was computed or a guarantee fails
    """
    g = solution.graph
    tree = load_tree(tree_path, g)
    if tree != solution.tree:
        raise InvariantViolation("tree file does not match the computed tree", {"tree": tree_path})
    tree_metrics = metrics(tree)
    if g.n >= 3:
        tree_metrics.check_bounds()

    solver = CarvingWidthSolver(g, solution.embedding, eps, exact_pow2)
    width = solver.width_of(tree)
    if abs(width - solution.width.carw) > (0 if solver.exact else 2 * eps):
        raise InvariantViolation(f"tree width {width} differs from carving-width {solution.width.carw}", {"width": width})

    seq = sequence_from_dict(read_json(sequence_path), g)
    seq.validate()
    if seq.ct != tree_metrics.ct:
        raise InvariantViolation(
            "sequence cost does not add up to the tree's total time", {"sequence_ct": str(seq.ct), "tree_ct": str(tree_metrics.ct)}
        )


def run_pipeline(
    graph_path: str,
    out_dir: str,
    n_runs: int = DEFAULT_RUNS,
    seed: int = 0,
    workers: int = 1,
    eps: float = DEFAULT_EPS,
    exact_pow2: bool = False,
) -> PipelineResult:
    """
    Run the whole ordering pipeline on a graph file.

    The tree and the sequence are written to `out_dir` and validated from disk.

    Raises:
        GraphFormatError: If the graph file is malformed
        NotPlanar: If the simplified network is not planar
        InvariantViolation: If a written artifact fails re-validation
    """
    raw, rotation = load_graph(graph_path)
    started = time.perf_counter()
    g = simplify(raw)
    simplify_time = time.perf_counter() - started

    started = time.perf_counter()
    emb = embed(g, rotation)
    embed_time = time.perf_counter() - started
    reporting.log(f"simplified to {g.n} vertices and {len(g.edges)} edges")

    solution = solve(g, emb, n_runs, stream_seed(seed, "carver"), workers, eps, exact_pow2)
    solution.timings = {"simplify": simplify_time, "embed": embed_time, **solution.timings}

    os.makedirs(out_dir, exist_ok=True)
    tree_path = os.path.join(out_dir, TREE_NAME)
    sequence_path = os.path.join(out_dir, SEQUENCE_NAME)
    save_tree(solution.tree, tree_path)
    write_json(solution.sequence.to_dict(), sequence_path)

    started = time.perf_counter()
    validate(solution, tree_path, sequence_path, eps, exact_pow2)
    solution.timings["validate"] = time.perf_counter() - started
    return PipelineResult(tree_path, sequence_path, solution)
