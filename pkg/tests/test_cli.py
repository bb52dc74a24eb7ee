from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from poolcast.cli import main
from poolcast.core import save_dataset
from poolcast.synthetic import yearly_corpus


@pytest.fixture(scope="module")
def dataset_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "yearly.csv"
    save_dataset(yearly_corpus(4, seed=61), path)
    return str(path)


def test_bench_command_writes_report(dataset_csv, tmp_path):
    out = tmp_path / "report.json"
    records = tmp_path / "records.csv"
    runner = CliRunner()
    result = runner.invoke(main, [
        "bench", "--input", dataset_csv, "--pools", "ets:reduced",
        "--seed", "3", "--out", str(out), "--records", str(records),
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["schema"] == "poolcast-report-v1"
    assert len(payload["records"]) == 4
    assert records.read_text().count("\n") == 5
    assert "MASE=" in result.output


def test_bench_missing_file_exit_3(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, [
        "bench", "--input", str(tmp_path / "nope.csv"), "--pools", "ets:reduced",
    ])
    assert result.exit_code == 3


def test_bench_bad_pool_exit_2(dataset_csv):
    runner = CliRunner()
    result = runner.invoke(main, [
        "bench", "--input", dataset_csv, "--pools", "ets:bogus",
    ])
    assert result.exit_code == 2


def test_bench_bad_flag_exit_2(dataset_csv):
    runner = CliRunner()
    result = runner.invoke(main, [
        "bench", "--input", dataset_csv, "--pools", "ets:reduced",
        "--criterion", "zzz",
    ])
    assert result.exit_code == 2


def test_pools_enumerate_lists_non_seasonal(tmp_path):
    out = tmp_path / "pools.csv"
    runner = CliRunner()
    result = runner.invoke(main, ["pools", "enumerate", "--non-seasonal",
                                  "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "189" in result.output
    lines = out.read_text().splitlines()
    assert len(lines) == 190  # header + pools


def test_pools_enumerate_scores_dataset(dataset_csv, tmp_path):
    out = tmp_path / "enum.json"
    runner = CliRunner()
    result = runner.invoke(main, [
        "pools", "enumerate", "--input", dataset_csv, "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    assert payload["total_pools"] == 189
    assert "reduced" in payload["named_pool_stats"]


def test_forecast_command(dataset_csv):
    runner = CliRunner()
    result = runner.invoke(main, [
        "forecast", "--input", dataset_csv, "--pool", "ets:reduced",
        "--levels", "0.8,0.95",
    ])
    assert result.exit_code == 0, result.output
    lines = [l for l in result.output.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "step,point,lower_0.8,upper_0.8,lower_0.95,upper_0.95"
    assert len(lines) == 1 + 6  # header + yearly horizon


def test_report_fva_roundtrip(dataset_csv, tmp_path):
    runner = CliRunner()
    rep_a = tmp_path / "a.json"
    rep_b = tmp_path / "b.json"
    for pool, path in (("ets:reduced", rep_a), ("ets:all", rep_b)):
        result = runner.invoke(main, [
            "bench", "--input", dataset_csv, "--pools", pool,
            "--seed", "3", "--out", str(path),
        ])
        assert result.exit_code == 0, result.output
    out = tmp_path / "fva.csv"
    result = runner.invoke(main, [
        "report", "fva", "--reports", str(rep_a), "--reports", str(rep_b),
        "--order", "ets:reduced,ets:all", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert "ets:all" in result.output
    header = out.read_text().splitlines()[0]
    assert header.startswith("pool,mase,cost_seconds,fva_vs_ets:reduced")


def test_report_fva_single_report_fails(dataset_csv, tmp_path):
    runner = CliRunner()
    rep_a = tmp_path / "a.json"
    result = runner.invoke(main, [
        "bench", "--input", dataset_csv, "--pools", "ets:reduced",
        "--out", str(rep_a),
    ])
    assert result.exit_code == 0
    result = runner.invoke(main, ["report", "fva", "--reports", str(rep_a)])
    assert result.exit_code == 2
