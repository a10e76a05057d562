"""
Experiment graphs: L x L grids with lognormal integer bond dimensions.

Every edge draws its own spread uniformly from [0, sigma_max] and its
dimension from a lognormal with the graph-wide mean mu_log, rounded to a
positive integer. A draw is accepted when it stays 2-connected after its
unit edges are removed and its simplified form fits the memory cap.
"""

import math
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core import reporting
from ..core.embedding import Embedding, embedding_from_rotation
from ..core.errors import CarveError, RejectionBudgetExhausted
from ..core.fingerprint import file_fingerprint, graph_fingerprint
from ..core.graph_io import Rotation, save_graph, write_json
from ..core.netgraph import NetworkGraph, is_biconnected, simplify, without_unit_edges
from ..solver.ratcatcher import DEFAULT_EPS, carving_width, within_width

DEFAULT_MEMORY_CAP_LOG2 = 36.0
DEFAULT_MAX_REJECTS = 1000
DEFAULT_SAMPLES = 100
DEFAULT_ACCEPTANCE_THRESHOLD = 0.01
SIGMA_SEARCH_DRAWS = 40
SIGMA_SEARCH_STEPS = 8
SIGMA_SEARCH_CEILING = 4.0
MANIFEST_NAME = "manifest.json"

# spawn keys of the named random streams derived from one seed
STREAMS = {"generate": 0, "carver": 1, "numeric": 2}


def stream(seed: int, name: str) -> np.random.Generator:
    """Generator for the named sub-stream of `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(STREAMS[name],)))


def stream_seed(seed: int, name: str) -> int:
    """Integer seed for the named sub-stream, for APIs that take a plain seed."""
    return int(np.random.SeedSequence(seed, spawn_key=(STREAMS[name],)).generate_state(1)[0])


def grid_id(row: int, col: int) -> str:
    return f"{row:02d}.{col:02d}"


def grid_rotation(L: int) -> Rotation:
    """Clockwise neighbour order (right, down, left, up) of every grid vertex."""
    rotation = {}
    for r in range(L):
        for c in range(L):
            around = []
            for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                if 0 <= r + dr < L and 0 <= c + dc < L:
                    around.append(grid_id(r + dr, c + dc))
            rotation[grid_id(r, c)] = around
    return rotation


def grid(L: int) -> Tuple[NetworkGraph, Embedding]:
    """
    L x L grid with unit weights and its natural embedding.

    Raises:
        CarveError: If L < 2
    """
    if L < 2:
        raise CarveError(f"grid side must be at least 2, got {L}")
    edges = []
    for r in range(L):
        for c in range(L):
            if c + 1 < L:
                edges.append((grid_id(r, c), grid_id(r, c + 1), 1))
            if r + 1 < L:
                edges.append((grid_id(r, c), grid_id(r + 1, c), 1))
    g = NetworkGraph([grid_id(r, c) for r in range(L) for c in range(L)], edges)
    return g, Embedding(g, grid_rotation(L))


def uniform_grid(L: int, d: int) -> Tuple[NetworkGraph, Embedding]:
    g, _ = grid(L)
    uniform = NetworkGraph(g.vertices, [(u, v, d) for u, v, _ in g.edge_list])
    return uniform, Embedding(uniform, grid_rotation(L))


@dataclass
class GenConfig:
    """Parameters of one batch of generated grids."""

    L: int
    mu_log: float
    sigma_max: float
    memory_cap_log2: float = DEFAULT_MEMORY_CAP_LOG2
    max_rejects: int = DEFAULT_MAX_REJECTS
    seed: int = 0

    def __post_init__(self):
        if self.L < 2:
            raise CarveError(f"L must be at least 2, got {self.L}")
        if self.sigma_max < 0:
            raise CarveError(f"sigma_max must be non-negative, got {self.sigma_max}")
        if self.memory_cap_log2 <= 0:
            raise CarveError(f"memory_cap_log2 must be positive, got {self.memory_cap_log2}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SampleStats:
    """Acceptance bookkeeping across calls to `sample`."""

    draws: int = 0
    accepted: int = 0
    rejected_biconnected: int = 0
    rejected_width: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.draws if self.draws else 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["acceptance_rate"] = self.acceptance_rate
        return data


def lognormal_weights(g: NetworkGraph, cfg: GenConfig, rng: np.random.Generator) -> NetworkGraph:
    """Copy of g with w = max(1, round(exp(N(mu, s)))) per edge, s ~ U(0, sigma_max)."""
    edges = []
    for u, v, _ in g.edge_list:
        spread = rng.uniform(0.0, cfg.sigma_max)
        w = max(1, int(round(math.exp(rng.normal(cfg.mu_log, spread)))))
        edges.append((u, v, w))
    return NetworkGraph(g.vertices, edges)


def rejection_reason(g: NetworkGraph, rotation: Rotation, memory_cap_log2: float, eps: float = DEFAULT_EPS) -> Optional[str]:
    """None if g passes both acceptance criteria, else the name of the first one it fails."""
    if not is_biconnected(without_unit_edges(g)):
        return "biconnected"
    simple = simplify(g)
    if not within_width(simple, embedding_from_rotation(simple, rotation), memory_cap_log2, eps):
        return "width"
    return None


def sample(cfg: GenConfig, rng: np.random.Generator, stats: Optional[SampleStats] = None) -> NetworkGraph:
    """
    Draw weighted grids until one is accepted.

    Raises:
        RejectionBudgetExhausted: After cfg.max_rejects rejected draws
    """
    stats = stats if stats is not None else SampleStats()
    base, _ = grid(cfg.L)
    rotation = grid_rotation(cfg.L)
    for _ in range(cfg.max_rejects + 1):
        g = lognormal_weights(base, cfg, rng)
        stats.draws += 1
        reason = rejection_reason(g, rotation, cfg.memory_cap_log2)
        if reason is None:
            stats.accepted += 1
            return g
        if reason == "biconnected":
            stats.rejected_biconnected += 1
        else:
            stats.rejected_width += 1
        reporting.log(f"rejected draw {stats.draws} ({reason})")
    raise RejectionBudgetExhausted(
        f"no accepted {cfg.L}x{cfg.L} grid after {cfg.max_rejects} rejections "
        f"({stats.rejected_biconnected} not 2-connected, {stats.rejected_width} too wide)"
    )


def largest_uniform_weight(L: int, memory_cap_log2: float, eps: float = DEFAULT_EPS) -> int:
    """
    Largest d such that the uniform-d L x L grid has carving-width at most the cap.

    The width of a uniform grid is its unweighted width times log2 d, so one
    exact solve on the uniform-2 grid fixes d, which is then confirmed.
    """
    g, emb = uniform_grid(L, 2)
    edges_per_cut = carving_width(g, emb, eps, exact_pow2=True).carw
    d = max(1, int(2 ** (memory_cap_log2 / edges_per_cut)))
    while edges_per_cut * math.log2(d + 1) <= memory_cap_log2 + eps:
        d += 1
    while d > 1 and edges_per_cut * math.log2(d) > memory_cap_log2 + eps:
        d -= 1
    while d > 1 and not within_width(*uniform_grid(L, d), memory_cap_log2, eps):
        d -= 1
    return d


def calibrate_mu(L: int, memory_cap_log2: float = DEFAULT_MEMORY_CAP_LOG2) -> float:
    """Natural-log mean whose uniform grid just fits the memory cap."""
    return math.log(largest_uniform_weight(L, memory_cap_log2))


def estimate_sigma_max(
    L: int,
    mu_log: float,
    rng: np.random.Generator,
    memory_cap_log2: float = DEFAULT_MEMORY_CAP_LOG2,
    threshold: float = DEFAULT_ACCEPTANCE_THRESHOLD,
    draws: int = SIGMA_SEARCH_DRAWS,
    ceiling: float = SIGMA_SEARCH_CEILING,
    steps: int = SIGMA_SEARCH_STEPS,
) -> float:
    """
    Largest spread whose Monte-Carlo acceptance rate stays at or above `threshold`.

    Acceptance falls as the spread grows, so the spread is bisected on
    [0, ceiling] with `draws` sampled graphs per step.
    """
    base, _ = grid(L)
    rotation = grid_rotation(L)

    def rate(sigma: float) -> float:
        cfg = GenConfig(L, mu_log, sigma, memory_cap_log2)
        accepted = sum(
            rejection_reason(lognormal_weights(base, cfg, rng), rotation, memory_cap_log2) is None
            for _ in range(draws)
        )
        return accepted / draws

    if rate(ceiling) >= threshold:
        return ceiling
    lo, hi = 0.0, ceiling
    for _ in range(steps):
        mid = (lo + hi) / 2
        if rate(mid) >= threshold:
            lo = mid
        else:
            hi = mid
        reporting.log(f"sigma_max in [{lo:.3f}, {hi:.3f}]")
    return lo


def write_samples(cfg: GenConfig, count: int, out_dir: str) -> Dict[str, Any]:
    """
    Sample `count` graphs into numbered JSON files plus a manifest.

    The manifest records the configuration, acceptance statistics and the
    SHA-256 fingerprint of every file and graph.

    Returns:
        The manifest
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = stream(cfg.seed, "generate")
    stats = SampleStats()
    rotation = grid_rotation(cfg.L)
    entries: List[Dict[str, str]] = []
    for i in range(count):
        g = sample(cfg, rng, stats)
        name = f"graph_{i:03d}.json"
        path = os.path.join(out_dir, name)
        save_graph(g, path, rotation)
        entries.append({"file": name, "sha256": file_fingerprint(path), "graph_sha256": graph_fingerprint(g)})
    manifest = {"config": cfg.to_dict(), "stats": stats.to_dict(), "samples": entries}
    write_json(manifest, os.path.join(out_dir, MANIFEST_NAME))
    reporting.log(f"wrote {count} graphs to {out_dir} (acceptance {stats.acceptance_rate:.2%})")
    return manifest
