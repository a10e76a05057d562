import csv
import json
import math
import os
import sys
from typing import Any, Dict, List, Tuple

from ..core import reporting
from ..core.ctree import RootedContractionTree, metrics, node_weight_identity_check, unroot
from ..core.embedding import Embedding
from ..core.errors import CarveError, InvariantViolation
from ..core.graph_io import load_graph, load_tree, read_json, save_graph, save_tree, write_json
from ..core.netgraph import NetworkGraph, simplify
from ..core.tree_decomposition import to_tree_decomposition
from ..experiments import bench as bench_mod
from ..experiments.netgen import GenConfig, calibrate_mu, estimate_sigma_max, stream, stream_seed, write_samples
from ..experiments.pipeline import embed, run_pipeline
from ..solver.carver import best_of
from ..solver.oracle import exact_min_ct, numeric_check
from ..solver.ratcatcher import CarvingWidthSolver
from ..solver.sequencer import flops_lower_bound, optimal_root, sequence, sequence_from_dict


def emit(args, data: Any) -> None:
    """Print a result as JSON, or as CSV rows with --format csv."""
    if getattr(args, "format", "json") == "csv":
        rows = data if isinstance(data, list) else [{"key": k, "value": v} for k, v in _flatten(data).items()]
        if rows:
            writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return
    print(json.dumps(data, indent=2, sort_keys=True))


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat = {}
    for key, value in data.items():
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{prefix}{key}."))
        else:
            flat[f"{prefix}{key}"] = value
    return flat


def load_simple(path: str) -> Tuple[NetworkGraph, Embedding]:
    raw, rotation = load_graph(path)
    g = simplify(raw)
    return g, embed(g, rotation)


def handle_simplify_command(args):
    raw, rotation = load_graph(args.graph)
    g = simplify(raw)
    reporting.info(f"{raw.n} vertices, {len(raw.edge_list)} raw edges -> {len(g.edges)} simple edges")
    if g.unit_bridges:
        reporting.warn(f"{len(g.unit_bridges)} unit edges kept to stay connected")
    if args.output:
        save_graph(g, args.output, rotation)
        reporting.success(f"Simplified graph written to {args.output}")
    emit(args, {"n": g.n, "edges": len(g.edges), "unit_bridges": len(g.unit_bridges)})


def handle_width_command(args):
    g, emb = load_simple(args.graph)
    result = CarvingWidthSolver(g, emb, args.eps, args.exact_pow2).carving_width()
    reporting.success(f"Carving-width {result.carw:.6g} after {result.decision_calls} decisions")
    emit(args, result.as_dict())


def handle_decompose_command(args):
    g, emb = load_simple(args.graph)
    tree, free_metrics = best_of(
        g, emb, args.runs, stream_seed(args.seed, "carver"), args.target, args.workers, args.eps, args.exact_pow2
    )
    if args.output:
        save_tree(tree, args.output)
        reporting.success(f"Contraction tree written to {args.output}")
    emit(args, free_metrics.as_dict())


def handle_sequence_command(args):
    g, _ = load_simple(args.graph)
    tree = load_tree(args.tree, g)
    rooted = tree if isinstance(tree, RootedContractionTree) else optimal_root(tree)
    seq = sequence(rooted)
    data = seq.to_dict()
    if args.output:
        write_json(data, args.output)
        reporting.success(f"Sequence of {len(seq.steps)} steps written to {args.output}")
    emit(args, {"ct": data["ct"], "cs_alg1": data["cs_alg1"], "peak": data["peak"], "flops": str(flops_lower_bound(seq.ct))})


def _tree_problems(g: NetworkGraph, emb: Embedding, tree, args) -> Tuple[List[str], Dict[str, Any], int]:
    free = unroot(tree) if isinstance(tree, RootedContractionTree) else tree
    rooted = tree if isinstance(tree, RootedContractionTree) else optimal_root(tree)
    problems: List[str] = []
    tree_metrics = metrics(free)
    if g.n >= 3:
        problems += tree_metrics.bound_violations()
    if not node_weight_identity_check(free):
        problems.append("a squared node weight differs from the product of its arc weights")
    td = to_tree_decomposition(free)
    try:
        td.validate()
    except CarveError as e:
        problems.append(f"tree decomposition: {e}")
    if td.weighted_width != tree_metrics.bt:
        problems.append(f"tree decomposition width {td.weighted_width} differs from Bt {tree_metrics.bt}")

    solver = CarvingWidthSolver(g, emb, args.eps, args.exact_pow2)
    width = solver.width_of(free)
    carw = solver.carving_width().carw
    report = {"metrics": tree_metrics.as_dict(), "width": width, "carw": carw, "optimal": width <= carw + 2 * args.eps}
    return problems, report, metrics(rooted).ct


def handle_verify_command(args):
    """Re-check a sequence, the tree it came from and its numeric result; violations exit with a dump."""
    g, emb = load_simple(args.graph)
    seq = sequence_from_dict(read_json(args.sequence), g)
    problems: List[str] = []
    report: Dict[str, Any] = {"sequence_ct": str(seq.ct)}
    try:
        seq.validate()
    except CarveError as e:
        problems.append(f"sequence: {e}")
    if args.tree:
        tree_problems, tree_report, tree_ct = _tree_problems(g, emb, load_tree(args.tree, g), args)
        problems += tree_problems
        report.update(tree_report)
        if seq.ct != tree_ct:
            problems.append(f"sequence cost {seq.ct} differs from the tree's total time {tree_ct}")
    if args.numeric and not problems:
        check = numeric_check(g, seq, stream(args.seed, "numeric"))
        report["numeric"] = check.as_dict()
        if not check.ok:
            problems.append(f"numeric result is off by {check.error:.3g} relative to the reference")
    if problems:
        raise InvariantViolation(f"{len(problems)} check(s) failed", {"problems": problems, **report})
    reporting.success("All checks passed")
    emit(args, report)


def handle_exact_command(args):
    g, _ = load_simple(args.graph)
    ct, tree = exact_min_ct(g, args.budget)
    if args.output:
        save_tree(tree, args.output)
        reporting.success(f"Optimal tree written to {args.output}")
    emit(args, {"ct": str(ct), "log2_ct": math.log2(ct)})


def handle_generate_command(args):
    mu_log = calibrate_mu(args.L, args.cap) if args.mu == "auto" else float(args.mu)
    if args.sigma_max == "auto":
        sigma_max = estimate_sigma_max(args.L, mu_log, stream(args.seed, "generate"), args.cap)
        reporting.info(f"Estimated sigma_max {sigma_max:.3f}")
    else:
        sigma_max = float(args.sigma_max)
    cfg = GenConfig(args.L, mu_log, sigma_max, args.cap, args.max_rejects, args.seed)
    manifest = write_samples(cfg, args.count, args.output)
    reporting.success(f"{args.count} graphs written to {args.output}")
    emit(args, {"config": manifest["config"], "stats": manifest["stats"]})


def handle_bench_command(args):
    cfg = bench_mod.BenchConfig(
        L_values=args.L,
        samples=args.samples,
        n_runs=args.runs,
        seed=args.seed,
        sigma_max=None if args.sigma_max == "auto" else float(args.sigma_max),
        memory_cap_log2=args.cap,
        max_rejects=args.max_rejects,
        exact_budget_s=args.budget,
        workers=args.workers,
        eps=args.eps,
    )
    records = bench_mod.bench(cfg)
    failed = [r for r in records if r.error]
    if failed:
        reporting.warn(f"{len(failed)} of {len(records)} graphs failed")
    if args.output:
        directory = os.path.dirname(args.output)
        if directory:
            os.makedirs(directory, exist_ok=True)
        bench_mod.write_csv(records, args.output)
        reporting.success(f"{len(records)} records written to {args.output}")
    if args.format == "csv":
        emit(args, bench_mod.aggregate(records))
    else:
        emit(args, {"records": [r.to_dict() for r in records], "aggregates": bench_mod.aggregate(records)})


def handle_pipeline_command(args):
    result = run_pipeline(args.graph, args.output, args.runs, args.seed, args.workers, args.eps, args.exact_pow2)
    reporting.success(f"Tree and sequence written to {args.output}")
    emit(args, result.summary())
