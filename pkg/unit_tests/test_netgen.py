import math
import os

import pytest

from graph_factories import rng
from src.core.embedding import planar_embedding
from src.core.errors import CarveError, RejectionBudgetExhausted
from src.core.fingerprint import file_fingerprint
from src.core.graph_io import load_graph, read_json
from src.core.netgraph import is_biconnected, simplify, without_unit_edges
from src.experiments.netgen import (
    MANIFEST_NAME,
    SIGMA_SEARCH_CEILING,
    GenConfig,
    SampleStats,
    calibrate_mu,
    estimate_sigma_max,
    grid,
    largest_uniform_weight,
    lognormal_weights,
    sample,
    stream,
    write_samples,
)
from src.solver.ratcatcher import carving_width


def test_grid_sizes():
    for L in (2, 3, 5):
        g, emb = grid(L)
        assert g.n == L * L
        assert len(g.edges) == 2 * L * (L - 1)
        assert len(emb.faces) == (L - 1) ** 2 + 1
        assert set(g.weight.values()) == {1}


def test_grid_ids_are_row_major():
    g, _ = grid(3)
    assert g.vertices[:3] == ("00.00", "00.01", "00.02")
    assert g.has_edge("01.01", "02.01")


def test_grid_side_must_be_at_least_two():
    with pytest.raises(CarveError):
        grid(1)


def test_config_validation():
    with pytest.raises(CarveError):
        GenConfig(L=3, mu_log=1.0, sigma_max=-0.1)
    with pytest.raises(CarveError):
        GenConfig(L=3, mu_log=1.0, sigma_max=0.5, memory_cap_log2=0)


def test_zero_spread_gives_uniform_weights():
    g, _ = grid(3)
    weighted = lognormal_weights(g, GenConfig(3, math.log(2), 0.0), rng(0))
    assert set(weighted.weight.values()) == {2}
    tiny = lognormal_weights(g, GenConfig(3, -3.0, 0.0), rng(0))
    assert set(tiny.weight.values()) == {1}


def test_weights_are_deterministic_under_seed():
    g, _ = grid(3)
    cfg = GenConfig(3, 2.0, 1.5, seed=42)
    assert lognormal_weights(g, cfg, rng(42)) == lognormal_weights(g, cfg, rng(42))
    assert all(w >= 1 for w in lognormal_weights(g, cfg, rng(7)).weight.values())


def test_named_streams_differ():
    assert stream(1, "generate").random() != stream(1, "carver").random()
    assert stream(1, "generate").random() == stream(1, "generate").random()


def test_largest_uniform_weight_on_c4():
    assert largest_uniform_weight(2, 8) == 16
    assert calibrate_mu(2, 8) == pytest.approx(math.log(16))


def test_calibrated_uniform_grid_is_accepted_first():
    mu = calibrate_mu(3, 12)
    stats = SampleStats()
    g = sample(GenConfig(3, mu, 0.0, memory_cap_log2=12), rng(0), stats)
    assert stats.draws == 1
    assert stats.accepted == 1
    assert len(set(g.weight.values())) == 1


def test_oversized_weights_exhaust_the_rejection_budget():
    stats = SampleStats()
    cfg = GenConfig(3, math.log(2 ** 40), 0.0, memory_cap_log2=36, max_rejects=3)
    with pytest.raises(RejectionBudgetExhausted):
        sample(cfg, rng(0), stats)
    assert stats.draws == 4
    assert stats.rejected_width == 4


def test_accepted_graphs_meet_both_criteria():
    cfg = GenConfig(3, calibrate_mu(3, 12), 1.0, memory_cap_log2=12)
    generator = rng(5)
    stats = SampleStats()
    for _ in range(5):
        g = sample(cfg, generator, stats)
        assert is_biconnected(without_unit_edges(g))
        simple = simplify(g)
        assert min(simple.weight.values()) >= 2
        assert carving_width(simple, planar_embedding(simple)).carw <= 12 + 1e-9
    assert stats.accepted == 5
    assert 0 < stats.acceptance_rate <= 1


def test_sigma_estimate_stays_in_range():
    assert estimate_sigma_max(2, math.log(2), rng(0), memory_cap_log2=8, threshold=0.0, draws=3) == SIGMA_SEARCH_CEILING
    assert estimate_sigma_max(2, math.log(2 ** 20), rng(0), memory_cap_log2=8, threshold=1.0, draws=5) == 0.0


def test_write_samples_manifest(tmp_path):
    cfg = GenConfig(3, calibrate_mu(3, 12), 0.8, memory_cap_log2=12, seed=42)
    manifest = write_samples(cfg, 3, str(tmp_path / "a"))
    assert read_json(str(tmp_path / "a" / MANIFEST_NAME)) == manifest
    assert manifest["config"]["seed"] == 42
    assert manifest["stats"]["accepted"] == 3
    for entry in manifest["samples"]:
        path = str(tmp_path / "a" / entry["file"])
        assert file_fingerprint(path) == entry["sha256"]
        g, rotation = load_graph(path)
        assert g.n == 9
        assert rotation is not None


def test_write_samples_is_byte_identical_across_runs(tmp_path):
    cfg = GenConfig(3, calibrate_mu(3, 12), 0.8, memory_cap_log2=12, seed=42)
    first = write_samples(cfg, 2, str(tmp_path / "a"))
    second = write_samples(cfg, 2, str(tmp_path / "b"))
    assert [e["sha256"] for e in first["samples"]] == [e["sha256"] for e in second["samples"]]
    assert sorted(os.listdir(tmp_path / "a")) == sorted(os.listdir(tmp_path / "b"))
