"""Command-line interface.

Exit codes: 0 on success, 2 on configuration errors, 3 on dataset errors.
"""

from __future__ import annotations

import json
import sys

import click

from .arima import arima_forecast, arima_search_exhaustive
from .bench import (
    BenchReport,
    ExperimentConfig,
    render_fva_text,
    report_fva,
    run_benchmark,
    run_pool_enumeration,
    write_fva_csv,
    write_records_csv,
)
from .core import load_dataset, split_fixed_origin
from .errors import ConfigError, DatasetError, PoolcastError
from .ets import ets_forecast, ets_select
from .ets.models import sort_canonical
from .pools import enumerate_balanced_pools, ets_pool, resolve_pool


def _parse_levels(text: str) -> tuple[float, ...]:
    try:
        levels = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"cannot parse levels {text!r}") from None
    if not levels:
        raise ConfigError("at least one confidence level is required")
    return levels


def _parse_pools(text: str) -> tuple[str, ...]:
    labels = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    if not labels:
        raise ConfigError("at least one pool label is required")
    return labels


@click.group()
def main() -> None:
    """Model-pool forecasting benchmark."""


@main.command("bench")
@click.option("--input", "input_path", required=True, help="Dataset file.")
@click.option("--format", "fmt", type=click.Choice(["wide-csv", "jsonl"]),
              default="wide-csv", show_default=True)
@click.option("--pools", required=True,
              help="Comma-separated pool labels, e.g. 'ets:reduced,arima:K2'.")
@click.option("--criterion", type=click.Choice(["aic", "bic", "aicc"]),
              default="aicc", show_default=True)
@click.option("--levels", default="0.95", show_default=True,
              help="Comma-separated confidence levels.")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--paths", type=int, default=5000, show_default=True,
              help="Simulation paths for multiplicative-trend intervals.")
@click.option("--aicc-form", type=click.Choice(["standard", "paper"]),
              default="standard", show_default=True)
@click.option("--msis-form", type=click.Choice(["mean", "sum"]),
              default="mean", show_default=True)
@click.option("--out", "out_path", default=None, help="Report JSON path.")
@click.option("--records", "records_path", default=None, help="Per-series CSV path.")
def bench_cmd(input_path, fmt, pools, criterion, levels, seed, workers, paths,
              aicc_form, msis_form, out_path, records_path):
    """Run a pool-vs-pool benchmark over a dataset."""
    try:
        config = ExperimentConfig(
            pools=_parse_pools(pools),
            dataset_path=input_path,
            dataset_format=fmt,
            criterion=criterion,
            levels=_parse_levels(levels),
            seed=seed,
            workers=workers,
            paths=paths,
            aicc_form=aicc_form,
            msis_form=msis_form,
        )
    except PoolcastError as exc:
        _fail(exc, 2)
    try:
        report = run_benchmark(config)
    except DatasetError as exc:
        _fail(exc, 3)
    except ConfigError as exc:
        _fail(exc, 2)
    if out_path:
        report.save(out_path)
    if records_path:
        write_records_csv(report, records_path)
    for label in report.pools:
        agg = report.aggregates[label]
        if not agg.get("n_records"):
            click.echo(f"{label}: no records")
            continue
        msis_txt = " ".join(f"MSIS[{k}]={v:.6g}" for k, v in agg["msis_mean"].items())
        click.echo(
            f"{label}: n={agg['n_records']} MASE={agg['mase_mean']:.6g} "
            f"{msis_txt} cost={agg['cost_mean_seconds']:.6g}s"
        )
    click.echo(f"skips: {len(report.skips)}")


@main.group("pools")
def pools_group() -> None:
    """Pool utilities."""


@pools_group.command("enumerate")
@click.option("--seasonal/--non-seasonal", "seasonal", default=True,
              help="Enumerate over the seasonal or non-seasonal applicable set.")
@click.option("--input", "input_path", default=None,
              help="Optional dataset: scores every balanced pool on it.")
@click.option("--format", "fmt", type=click.Choice(["wide-csv", "jsonl"]),
              default="wide-csv", show_default=True)
@click.option("--criterion", type=click.Choice(["aic", "bic", "aicc"]),
              default="aicc", show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--paths", type=int, default=5000, show_default=True)
@click.option("--out", "out_path", default=None, help="Output path (CSV or JSON).")
def pools_enumerate_cmd(seasonal, input_path, fmt, criterion, seed, paths, out_path):
    """List every balanced pool, or score them against a dataset."""
    if input_path is None:
        models = sort_canonical(ets_pool("all", seasonal))
        lines = ["size,models"]
        count = 0
        for members in enumerate_balanced_pools(set(models), seasonal):
            count += 1
            lines.append(f"{len(members)},{'|'.join(m.descriptor for m in members)}")
        text = "\n".join(lines) + "\n"
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        click.echo(f"enumerated {count} balanced pools "
                   f"({'seasonal' if seasonal else 'non-seasonal'})")
        if not out_path:
            click.echo(f"(pass --out to write the {count}-row table)")
        return
    try:
        dataset = load_dataset(input_path, fmt)
    except DatasetError as exc:
        _fail(exc, 3)
    try:
        config = ExperimentConfig(pools=("ets:all",), dataset_path=input_path,
                                  criterion=criterion, seed=seed, paths=paths)
        result = run_pool_enumeration(config, dataset)
    except PoolcastError as exc:
        _fail(exc, 2)
    payload = result.to_payload()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    click.echo(f"scored {result.total_pools} pools on {result.n_series} series "
               f"({result.fit_count} model fits)")
    for name, stats in payload["named_pool_stats"].items():
        click.echo(f"  {name:<24} size={stats['size']:<3} MASE={stats['mase_mean']:.4f} "
                   f"rank={stats['rank']}/{result.total_pools}")


@main.group("report")
def report_group() -> None:
    """Report post-processing."""


@report_group.command("fva")
@click.option("--reports", "report_paths", required=True, multiple=True,
              help="Report JSON files (repeatable), simplest pool first.")
@click.option("--order", "order_text", default=None,
              help="Comma-separated pool labels, simplest first.")
@click.option("--out", "out_path", default=None, help="CSV output path.")
def report_fva_cmd(report_paths, order_text, out_path):
    """Forecast-value-added / computational-cost-reduction table."""
    try:
        reports = [BenchReport.load(p) for p in report_paths]
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        _fail(DatasetError(f"cannot read report: {exc}"), 3)
    ordering = [tok.strip() for tok in order_text.split(",")] if order_text else None
    try:
        table = report_fva(reports, ordering)
    except PoolcastError as exc:
        _fail(exc, 2)
    click.echo(render_fva_text(table))
    if out_path:
        write_fva_csv(table, out_path)


@main.command("forecast")
@click.option("--input", "input_path", required=True)
@click.option("--format", "fmt", type=click.Choice(["wide-csv", "jsonl"]),
              default="wide-csv", show_default=True)
@click.option("--id", "series_id", default=None, help="Series id (default: first).")
@click.option("--pool", default="ets:reduced", show_default=True)
@click.option("--criterion", type=click.Choice(["aic", "bic", "aicc"]),
              default="aicc", show_default=True)
@click.option("--levels", default="0.95", show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--paths", type=int, default=5000, show_default=True)
@click.option("--out", "out_path", default=None, help="CSV path (default stdout).")
def forecast_cmd(input_path, fmt, series_id, pool, criterion, levels, seed,
                 paths, out_path):
    """Forecast one series and emit point + interval columns as CSV."""
    try:
        levels_t = _parse_levels(levels)
        pool_obj = resolve_pool(pool)
    except (PoolcastError, ValueError) as exc:
        _fail(exc, 2)
    try:
        dataset = load_dataset(input_path, fmt)
        if len(dataset) == 0:
            raise DatasetError("dataset is empty")
        series = dataset.get(series_id) if series_id else dataset.series[0]
    except KeyError:
        _fail(DatasetError(f"series {series_id!r} not found"), 3)
    except DatasetError as exc:
        _fail(exc, 3)
    split = split_fixed_origin(series)
    try:
        pool_obj = resolve_pool(pool, seasonal=series.period_s > 1)
        if pool_obj.family == "ets":
            fit, _ = ets_select(split.train, series.period_s, pool_obj.ets_specs, criterion)
            fc = ets_forecast(fit, series.horizon_h, levels=levels_t, paths=paths, seed=seed)
        else:
            fit, _ = arima_search_exhaustive(split.train, series.period_s,
                                             pool_obj.arima_max_order, criterion)
            fc = arima_forecast(fit, series.horizon_h, levels=levels_t)
    except PoolcastError as exc:
        _fail(exc, 2)
    lines = []
    header = ["step", "point"]
    for lv in sorted(fc.intervals):
        header += [f"lower_{lv:g}", f"upper_{lv:g}"]
    lines.append(",".join(header))
    for i in range(len(fc.point)):
        row = [str(i + 1), f"{fc.point[i]:.6g}"]
        for lv in sorted(fc.intervals):
            lo, up = fc.intervals[lv]
            row += [f"{lo[i]:.6g}", f"{up[i]:.6g}"]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"selected {fc.source} ({fc.method} intervals) -> {out_path}")
    else:
        click.echo(f"# selected {fc.source} ({fc.method} intervals)")
        sys.stdout.write(text)


def _fail(exc: Exception, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


if __name__ == "__main__":
    main()
