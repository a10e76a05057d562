"""
Benchmark harness: sampled grids, the carving pipeline and an exact baseline.

For every grid side L and sample index the harness draws an accepted
lognormal grid, orders it, and compares the total time against the subset
DP optimum when that is within reach. Records without a baseline carry a
null rho and are left out of the rho aggregates.
"""

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core import reporting
from ..core.embedding import embedding_from_rotation
from ..core.errors import BudgetExceeded, CarveError, InvariantViolation, TooLarge
from ..core.netgraph import simplify
from ..solver.oracle import EXACT_MAX_VERTICES, exact_min_ct
from ..solver.ratcatcher import DEFAULT_EPS
from .netgen import (
    DEFAULT_MAX_REJECTS,
    DEFAULT_MEMORY_CAP_LOG2,
    GenConfig,
    calibrate_mu,
    estimate_sigma_max,
    grid_rotation,
    sample,
    stream,
    stream_seed,
)
from .pipeline import DEFAULT_RUNS, solve

DEFAULT_EXACT_BUDGET_S = 600.0
AGGREGATE_STATS = ("mean", "median", "stddev")
AGGREGATE_COLUMNS = ("carw", "cw_time_s", "avg_ec_time_s", "carve_time_s", "rho")


@dataclass
class BenchRecord:
    """One benchmarked graph. Exact integers stay Python ints."""

    L: int
    seed: int
    carw: Optional[float] = None
    cw_time_s: Optional[float] = None
    avg_ec_time_s: Optional[float] = None
    carve_time_s: Optional[float] = None
    carve_ct: Optional[int] = None
    exact_ct: Optional[int] = None
    rho: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("carve_ct", "exact_ct"):
            if data[key] is not None:
                data[key] = str(data[key])
        return data


@dataclass
class BenchConfig:
    L_values: Sequence[int]
    samples: int
    n_runs: int = DEFAULT_RUNS
    seed: int = 0
    sigma_max: Optional[float] = None
    memory_cap_log2: float = DEFAULT_MEMORY_CAP_LOG2
    max_rejects: int = DEFAULT_MAX_REJECTS
    exact_budget_s: Optional[float] = DEFAULT_EXACT_BUDGET_S
    workers: int = 1
    eps: float = DEFAULT_EPS


def bench_graph(gen: GenConfig, cfg: BenchConfig) -> BenchRecord:
    """
    Sample one grid under `gen` and benchmark it.

    Per-graph failures are recorded in the `error` field; an exact optimum
    beating the carving is an invariant violation and propagates.
    """
    record = BenchRecord(gen.L, gen.seed)
    try:
        raw = sample(gen, stream(gen.seed, "generate"))
        g = simplify(raw)
        emb = embedding_from_rotation(g, grid_rotation(gen.L))
        solution = solve(g, emb, cfg.n_runs, stream_seed(gen.seed, "carver"), 1, cfg.eps)
    except InvariantViolation:
        raise
    except CarveError as e:
        record.error = f"{type(e).__name__}: {e}"
        return record

    record.carw = solution.width.carw
    record.cw_time_s = solution.timings["width"]
    record.carve_time_s = solution.timings["carve"]
    record.avg_ec_time_s = solution.timings["carve"] / cfg.n_runs
    record.carve_ct = solution.ct

    if g.n <= EXACT_MAX_VERTICES:
        try:
            record.exact_ct, _ = exact_min_ct(g, cfg.exact_budget_s)
        except (BudgetExceeded, TooLarge) as e:
            reporting.log(f"L={gen.L} seed={gen.seed}: no exact baseline ({e})")
    if record.exact_ct is not None:
        record.rho = record.carve_ct / record.exact_ct
        if record.carve_ct < record.exact_ct:
            raise InvariantViolation(
                "carving beats the exact optimum",
                {"L": gen.L, "seed": gen.seed, "carve_ct": str(record.carve_ct), "exact_ct": str(record.exact_ct)},
            )
    return record


def bench(cfg: BenchConfig) -> List[BenchRecord]:
    """
    Benchmark `cfg.samples` graphs per grid side.

    Sample i of side L is generated from seed cfg.seed + i. The grid mean
    is calibrated per L and a missing sigma_max is estimated per L.

    Returns:
        Records sorted by (L, seed), independent of scheduling
    """
    jobs: List[GenConfig] = []
    for L in cfg.L_values:
        mu_log = calibrate_mu(L, cfg.memory_cap_log2)
        sigma_max = cfg.sigma_max
        if sigma_max is None:
            sigma_max = estimate_sigma_max(L, mu_log, stream(cfg.seed, "generate"), cfg.memory_cap_log2)
            reporting.log(f"L={L}: estimated sigma_max {sigma_max:.3f}")
        for i in range(cfg.samples):
            jobs.append(GenConfig(L, mu_log, sigma_max, cfg.memory_cap_log2, cfg.max_rejects, cfg.seed + i))

    started = time.perf_counter()
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda gen: bench_graph(gen, cfg), jobs))
    else:
        records = [bench_graph(gen, cfg) for gen in jobs]
    reporting.log(f"benchmarked {len(records)} graphs in {time.perf_counter() - started:.1f}s")
    return sorted(records, key=lambda r: (r.L, r.seed))


def aggregate(records: Sequence[BenchRecord]) -> List[Dict[str, Any]]:
    """
    Mean, median and population standard deviation of each numeric column per L.

    Missing values are skipped; a column with no values aggregates to None.
    """
    rows = []
    for L in sorted({r.L for r in records}):
        group = [r for r in records if r.L == L]
        for stat in AGGREGATE_STATS:
            row: Dict[str, Any] = {"L": L, "stat": stat, "count": len(group)}
            for column in AGGREGATE_COLUMNS:
                values = np.array([getattr(r, column) for r in group if getattr(r, column) is not None], dtype=float)
                if values.size == 0:
                    row[column] = None
                elif stat == "mean":
                    row[column] = float(np.mean(values))
                elif stat == "median":
                    row[column] = float(np.median(values))
                else:
                    row[column] = float(np.std(values))
            rows.append(row)
    return rows


def csv_header() -> List[str]:
    return ["row"] + [f.name for f in fields(BenchRecord)]


def write_csv(records: Sequence[BenchRecord], path: str, with_aggregates: bool = True) -> None:
    """
    Write records sorted by (L, seed), then one aggregate row per L and statistic.

    The first column tells sample rows ("sample") from aggregate rows
    ("mean", "median", "stddev"). Missing values are empty cells.
    """
    header = csv_header()
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=header)
        writer.writeheader()
        for record in sorted(records, key=lambda r: (r.L, r.seed)):
            writer.writerow({"row": "sample", **_cells(record.to_dict())})
        if with_aggregates:
            for row in aggregate(records):
                cells = {key: row.get(key) for key in header if key in row}
                cells["row"] = row["stat"]
                writer.writerow(_cells(cells))


def _cells(data: Dict[str, Any]) -> Dict[str, Any]:
    return {key: "" if value is None else value for key, value in data.items() if key != "stat" and key != "count"}
