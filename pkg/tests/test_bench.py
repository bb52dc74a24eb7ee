from __future__ import annotations

import io
import json

import numpy as np
import pytest

from poolcast.bench import (
    BenchReport,
    ExperimentConfig,
    canonical_payload,
    report_fva,
    run_benchmark,
    run_pool_enumeration,
    write_records_csv,
)
from poolcast.core import Dataset, TimeSeries
from poolcast.errors import ConfigError, DatasetMismatch
from poolcast.synthetic import quarterly_corpus, yearly_corpus


def _tiny_dataset(n=4, seed=17):
    return yearly_corpus(n, seed=seed)


def test_quarterly_seasonal_families_end_to_end():
    ds = quarterly_corpus(3, seed=71)
    cfg = ExperimentConfig(pools=("ets:reduced", "arima:K1"), seed=13)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    assert len(rep.records) + len(rep.skips) == 2 * len(ds)
    for r in rep.records_for("arima:K1"):
        assert r.selected_model.startswith("ARIMA(")
        assert "[4]" in r.selected_model
    for r in rep.records_for("ets:reduced"):
        assert len(r.covered[0.95]) == 8  # quarterly horizon


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(pools=())
    with pytest.raises(ConfigError):
        ExperimentConfig(pools=("ets:reduced",), criterion="zzz")
    with pytest.raises(ConfigError):
        ExperimentConfig(pools=("ets:reduced",), levels=(1.5,))
    with pytest.raises(ConfigError):
        ExperimentConfig(pools=("ets:nope",))


def test_singleton_dataset_reduced_pool():
    ds = _tiny_dataset(1)
    cfg = ExperimentConfig(pools=("ets:reduced",), seed=2)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    assert len(rep.records) == 1
    rec = rep.records[0]
    assert rec.selected_model in {"ANN", "MNN", "AAdN", "MAdN"}
    assert rec.cost_seconds > 0
    assert rep.aggregates["ets:reduced"]["n_records"] == 1


def test_superset_pool_dominates_criterion():
    ds = _tiny_dataset(5)
    cfg = ExperimentConfig(pools=("ets:reduced", "ets:all"), seed=2)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    by_pool = {
        label: {r.series_id: r for r in rep.records_for(label)}
        for label in rep.pools
    }
    for sid, rec_all in by_pool["ets:all"].items():
        rec_red = by_pool["ets:reduced"][sid]
        assert rec_all.criterion_value <= rec_red.criterion_value + 1e-9


def test_crash_isolation_constant_series():
    # constant series: zero seasonal-naive denominator -> skip, not abort
    good = yearly_corpus(2, seed=3).series
    const = TimeSeries(id="CONST", period_s=1, values=np.full(30, 7.0), horizon_h=6)
    ds = Dataset(series=tuple(good) + (const,), frequency_label="yearly")
    cfg = ExperimentConfig(pools=("ets:reduced",), seed=1)
    stream = io.StringIO()
    rep = run_benchmark(cfg, ds, progress_stream=stream)
    assert len(rep.records) + len(rep.skips) == len(ds)
    assert any(s["series_id"] == "CONST" for s in rep.skips)
    events = [json.loads(line) for line in stream.getvalue().splitlines()]
    assert any(e["event"] == "skip" and e["series_id"] == "CONST" for e in events)


def test_determinism_across_worker_counts():
    ds = _tiny_dataset(6, seed=23)
    cfg1 = ExperimentConfig(pools=("ets:reduced", "arima:K1"), seed=9, workers=1)
    cfg2 = ExperimentConfig(pools=("ets:reduced", "arima:K1"), seed=9, workers=2)
    rep1 = run_benchmark(cfg1, ds, progress_stream=io.StringIO())
    rep2 = run_benchmark(cfg2, ds, progress_stream=io.StringIO())
    assert canonical_payload(rep1.to_payload()) == canonical_payload(rep2.to_payload())


def test_report_roundtrip_and_csv(tmp_path):
    ds = _tiny_dataset(3)
    cfg = ExperimentConfig(pools=("ets:reduced",), levels=(0.8, 0.95), seed=4)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    jpath = tmp_path / "rep.json"
    rep.save(jpath)
    rep2 = BenchReport.load(jpath)
    assert canonical_payload(rep.to_payload()) == canonical_payload(rep2.to_payload())
    cpath = tmp_path / "records.csv"
    write_records_csv(rep, cpath)
    lines = cpath.read_text().splitlines()
    assert len(lines) == 1 + len(rep.records)
    assert lines[0].startswith("series_id,pool,selected_model")


def test_aggregates_are_arithmetic_means():
    ds = _tiny_dataset(5, seed=37)
    cfg = ExperimentConfig(pools=("ets:reduced",), levels=(0.9,), seed=8)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    recs = rep.records_for("ets:reduced")
    agg = rep.aggregates["ets:reduced"]
    assert agg["mase_mean"] == pytest.approx(np.mean([r.mase for r in recs]), rel=1e-15)
    assert agg["msis_mean"]["0.9"] == pytest.approx(
        np.mean([r.msis[0.9] for r in recs]), rel=1e-15)
    assert agg["cost_mean_seconds"] == pytest.approx(
        np.mean([r.cost_seconds for r in recs]), rel=1e-12)


def test_dm_matrix_structure():
    ds = _tiny_dataset(8, seed=29)
    cfg = ExperimentConfig(pools=("ets:reduced", "arima:K1"), seed=3)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    key = "ets:reduced|arima:K1"
    assert key in rep.dm
    cells = rep.dm[key]
    assert [c["h"] for c in cells] == list(range(1, 7))
    for c in cells:
        if c["stat"] is not None:
            assert 0.0 <= c["p"] <= 1.0


def test_report_fva_and_mismatch(tmp_path):
    ds = _tiny_dataset(4, seed=31)
    rep_a = run_benchmark(ExperimentConfig(pools=("ets:reduced",), seed=5), ds,
                          progress_stream=io.StringIO())
    rep_b = run_benchmark(ExperimentConfig(pools=("ets:all",), seed=5), ds,
                          progress_stream=io.StringIO())
    table = report_fva([rep_a, rep_b], ["ets:reduced", "ets:all"])
    assert table["rows"][1]["fva_vs"]["ets:reduced"] == pytest.approx(
        100.0 * (rep_a.aggregates["ets:reduced"]["mase_mean"]
                 - rep_b.aggregates["ets:all"]["mase_mean"])
        / rep_a.aggregates["ets:reduced"]["mase_mean"]
    )
    with pytest.raises(DatasetMismatch):
        report_fva([rep_a])
    other = run_benchmark(ExperimentConfig(pools=("ets:reduced",), seed=5),
                          _tiny_dataset(3, seed=99), progress_stream=io.StringIO())
    with pytest.raises(DatasetMismatch):
        report_fva([rep_a, other])


def test_equal_reports_zero_fva():
    ds = _tiny_dataset(3, seed=41)
    cfg = ExperimentConfig(pools=("ets:reduced",), seed=7)
    rep = run_benchmark(cfg, ds, progress_stream=io.StringIO())
    table = report_fva([rep, rep], ["ets:reduced", "ets:reduced"])
    # identical aggregates -> zero FVA cells
    row = table["rows"][1]
    assert row["fva_vs"]["ets:reduced"] == pytest.approx(0.0, abs=1e-12)


def test_pool_enumeration_nonseasonal_counts_and_cache():
    ds = yearly_corpus(3, seed=51)
    cfg = ExperimentConfig(pools=("ets:all",), seed=11)
    result = run_pool_enumeration(cfg, ds, progress_stream=io.StringIO())
    assert result.total_pools == 189
    assert not result.seasonal
    # caching contract: exactly one fit per (series, applicable model);
    # the synthetic corpus is strictly positive so nothing is excluded
    assert result.fit_count == 8 * len(ds)
    assert result.named_pool_stats["reduced"]["size"] == 4
    sizes = set(result.size_summary)
    assert min(sizes) == 2 and max(sizes) == 8
    for name, stats in result.named_pool_stats.items():
        assert 1 <= stats["rank"] <= 189
