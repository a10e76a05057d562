import csv
import math
import statistics

import pytest

from src.experiments.bench import BenchConfig, BenchRecord, aggregate, bench, bench_graph, csv_header, write_csv
from src.experiments.netgen import GenConfig


def sample_records():
    return [
        BenchRecord(4, 3, carw=10.0, cw_time_s=0.5, avg_ec_time_s=0.01, carve_time_s=1.0, carve_ct=300, exact_ct=200, rho=1.5),
        BenchRecord(4, 1, carw=11.0, cw_time_s=0.7, avg_ec_time_s=0.02, carve_time_s=2.0, carve_ct=100, exact_ct=100, rho=1.0),
        BenchRecord(4, 2, carw=12.5, cw_time_s=0.4, avg_ec_time_s=0.03, carve_time_s=3.0, carve_ct=250, exact_ct=None, rho=None),
        BenchRecord(3, 9, carw=8.0, cw_time_s=0.1, avg_ec_time_s=0.01, carve_time_s=0.5, carve_ct=40, exact_ct=40, rho=1.0),
    ]


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_aggregate_matches_reference_statistics():
    rows = aggregate(sample_records())
    by_key = {(row["L"], row["stat"]): row for row in rows}
    carw = [10.0, 11.0, 12.5]
    assert by_key[(4, "mean")]["carw"] == pytest.approx(statistics.mean(carw))
    assert by_key[(4, "median")]["carw"] == pytest.approx(statistics.median(carw))
    assert by_key[(4, "stddev")]["carw"] == pytest.approx(statistics.pstdev(carw))
    assert by_key[(4, "mean")]["rho"] == pytest.approx(1.25)
    assert by_key[(4, "median")]["count"] == 3
    assert by_key[(3, "stddev")]["rho"] == 0.0
    assert [row["L"] for row in rows] == [3, 3, 3, 4, 4, 4]


def test_aggregate_of_a_column_without_values():
    rows = aggregate([BenchRecord(5, 0, error="TooLarge: boom")])
    assert all(row["rho"] is None and row["carw"] is None for row in rows)


def test_empty_csv_has_only_the_header(tmp_path):
    path = str(tmp_path / "bench.csv")
    write_csv([], path)
    assert read_rows(path) == [csv_header()]


def test_csv_rows_are_sorted_and_aggregated(tmp_path):
    path = str(tmp_path / "bench.csv")
    write_csv(sample_records(), path)
    rows = read_rows(path)
    header = rows[0]
    samples = [dict(zip(header, row)) for row in rows[1:] if row[0] == "sample"]
    assert [(s["L"], s["seed"]) for s in samples] == [("3", "9"), ("4", "1"), ("4", "2"), ("4", "3")]
    assert samples[2]["rho"] == ""
    assert samples[3]["carve_ct"] == "300"
    assert [row[0] for row in rows[5:]] == ["mean", "median", "stddev"] * 2


def test_record_dict_keeps_exact_integers():
    data = BenchRecord(4, 0, carve_ct=10 ** 30, exact_ct=10 ** 29).to_dict()
    assert data["carve_ct"] == str(10 ** 30)
    assert data["exact_ct"] == str(10 ** 29)


def test_small_benchmark():
    cfg = BenchConfig([2], samples=2, n_runs=2, seed=1, sigma_max=0.5, memory_cap_log2=10)
    records = bench(cfg)
    assert [(r.L, r.seed) for r in records] == [(2, 1), (2, 2)]
    for r in records:
        assert r.error is None
        assert r.exact_ct is not None
        assert r.rho >= 1
        assert r.carw <= 10 + 1e-9
        assert r.avg_ec_time_s == pytest.approx(r.carve_time_s / 2)


def test_benchmark_is_independent_of_workers():
    cfg = BenchConfig([2, 3], samples=2, n_runs=2, seed=4, sigma_max=0.5, memory_cap_log2=12)
    serial = bench(cfg)
    cfg.workers = 3
    parallel = bench(cfg)
    key = lambda r: (r.L, r.seed, r.carw, r.carve_ct, r.exact_ct)
    assert [key(r) for r in serial] == [key(r) for r in parallel]


def test_empty_range():
    assert bench(BenchConfig([], samples=3)) == []


def test_failed_graph_is_recorded():
    gen = GenConfig(3, math.log(2 ** 40), 0.0, memory_cap_log2=36, max_rejects=1, seed=0)
    record = bench_graph(gen, BenchConfig([3], samples=1))
    assert record.error.startswith("RejectionBudgetExhausted")
    assert record.rho is None


def test_four_by_four_grid_has_a_ratio():
    cfg = BenchConfig([4], samples=1, n_runs=4, seed=2, sigma_max=0.5, memory_cap_log2=12, exact_budget_s=None)
    [record] = bench(cfg)
    assert record.error is None
    assert record.exact_ct is not None
    assert math.isfinite(record.rho)
    assert record.rho >= 1
    assert record.carve_ct >= record.exact_ct
    assert record.carw <= 12 + 1e-9
