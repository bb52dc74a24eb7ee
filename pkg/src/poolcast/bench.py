"""Benchmark orchestration: pool-vs-pool experiments over datasets.

Every (series, pool) combination is evaluated independently: fixed-origin
split, model selection within the pool, forecasting at the configured
levels, and metric computation, with the wall-clock cost measured from the
start of candidate enumeration through the interval computation of the
selected model. Per-series failures become skip entries and never abort a
run. Forecasts and selections are a pure function of (dataset, config minus
worker count); only the timing fields vary between runs.
"""

from __future__ import annotations

import hashlib
import json
import math
import platform
import socket
import sys
import time
import zlib
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _pkg_version
from .arima import arima_forecast, arima_search_exhaustive
from .core import Dataset, TimeSeries, load_dataset, split_fixed_origin
from .criteria import AICC_FORMS, CRITERIA
from .errors import ConfigError, DatasetMismatch, PoolcastError
from .ets import ets_fit, ets_forecast, ets_select
from .ets.models import EtsModelSpec, sort_canonical
from .evaluation import (
    EvaluationRecord,
    calibration,
    ccr,
    coverage_flags,
    dm_test_modified,
    fva,
    mase,
    msis,
)
from .pools import enumerate_balanced_pools, ets_pool, resolve_pool

DM_SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    pools: tuple[str, ...]
    dataset_path: str | None = None
    dataset_format: str = "wide-csv"
    criterion: str = "aicc"
    levels: tuple[float, ...] = (0.95,)
    seed: int = 1
    workers: int = 1
    paths: int = 5000
    aicc_form: str = "standard"
    msis_form: str = "mean"

    def __post_init__(self):
        if not self.pools:
            raise ConfigError("at least one pool is required")
        if self.criterion not in CRITERIA:
            raise ConfigError(f"criterion must be one of {CRITERIA}")
        if self.aicc_form not in AICC_FORMS:
            raise ConfigError(f"aicc_form must be one of {AICC_FORMS}")
        if self.msis_form not in ("mean", "sum"):
            raise ConfigError("msis_form must be 'mean' or 'sum'")
        if not self.levels or any(not 0.0 < lv < 1.0 for lv in self.levels):
            raise ConfigError("levels must be a non-empty subset of (0, 1)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.paths < 2:
            raise ConfigError("paths must be >= 2")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        for label in self.pools:
            try:
                resolve_pool(label)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None


def series_seed(global_seed: int, series_id: str) -> int:
    return (global_seed * 1_000_003 + zlib.crc32(series_id.encode("utf-8"))) & 0x7FFFFFFF


def _evaluate_one(series: TimeSeries, pool_label: str, cfg: ExperimentConfig) -> dict:
    split = split_fixed_origin(series)
    pool = resolve_pool(pool_label, seasonal=series.period_s > 1)
    h = series.horizon_h
    seed = series_seed(cfg.seed, series.id)

    t0 = time.perf_counter()
    if pool.family == "ets":
        best, _log = ets_select(split.train, series.period_s, pool.ets_specs,
                                cfg.criterion, aicc_form=cfg.aicc_form)
        fc = ets_forecast(best, h, levels=cfg.levels, paths=cfg.paths, seed=seed)
    else:
        best, _log = arima_search_exhaustive(split.train, series.period_s,
                                             pool.arima_max_order, cfg.criterion,
                                             aicc_form=cfg.aicc_form)
        fc = arima_forecast(best, h, levels=cfg.levels)
    cost = time.perf_counter() - t0

    mase_v = mase(split.train, split.test, fc.point, series.period_s)
    msis_v: dict[float, float] = {}
    covered: dict[float, tuple[bool, ...]] = {}
    for lv in cfg.levels:
        lo, up = fc.intervals[lv]
        msis_v[lv] = msis(split.train, split.test, lo, up, 1.0 - lv,
                          series.period_s, form=cfg.msis_form)
        covered[lv] = coverage_flags(split.test, lo, up)
    errors = tuple(float(e) for e in (split.test - fc.point))
    record = EvaluationRecord(
        series_id=series.id,
        pool_label=pool_label,
        selected_model=best.descriptor,
        criterion_value=float(best.criteria[cfg.criterion]),
        mase=float(mase_v),
        msis={lv: float(v) for lv, v in msis_v.items()},
        covered=covered,
        cost_seconds=float(cost),
    )
    return {"record": record, "point_errors": errors}


def _evaluate_task(args) -> tuple[str, str, dict | None, str | None]:
    series, pool_label, cfg = args
    try:
        out = _evaluate_one(series, pool_label, cfg)
        return series.id, pool_label, out, None
    except PoolcastError as exc:
        return series.id, pool_label, None, f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # crash isolation: any failure becomes a skip
        return series.id, pool_label, None, f"{type(exc).__name__}: {exc}"


@dataclass
class BenchReport:
    meta: dict
    pools: tuple[str, ...]
    records: list[EvaluationRecord]
    point_errors: dict[tuple[str, str], tuple[float, ...]]
    skips: list[dict]
    aggregates: dict = field(default_factory=dict)
    dm: dict = field(default_factory=dict)

    def records_for(self, pool_label: str) -> list[EvaluationRecord]:
        return [r for r in self.records if r.pool_label == pool_label]

    def aggregate(self, pool_label: str) -> dict:
        return self.aggregates[pool_label]

    def to_payload(self) -> dict:
        records = []
        for r in self.records:
            records.append({
                "series_id": r.series_id,
                "pool": r.pool_label,
                "selected_model": r.selected_model,
                "criterion_value": r.criterion_value,
                "mase": r.mase,
                "msis": {f"{lv:g}": v for lv, v in sorted(r.msis.items())},
                "covered": {f"{lv:g}": list(r.covered[lv]) for lv in sorted(r.covered)},
                "point_errors": list(self.point_errors[(r.series_id, r.pool_label)]),
                "cost_seconds": r.cost_seconds,
            })
        return {
            "schema": "poolcast-report-v1",
            "meta": dict(self.meta),
            "pools": list(self.pools),
            "records": records,
            "skips": [dict(s) for s in self.skips],
            "aggregates": self.aggregates,
            "dm": self.dm,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_payload(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def from_payload(payload: dict) -> "BenchReport":
        records = []
        errors = {}
        for rec in payload["records"]:
            records.append(EvaluationRecord(
                series_id=rec["series_id"],
                pool_label=rec["pool"],
                selected_model=rec["selected_model"],
                criterion_value=rec["criterion_value"],
                mase=rec["mase"],
                msis={float(k): v for k, v in rec["msis"].items()},
                covered={float(k): tuple(bool(b) for b in v)
                         for k, v in rec["covered"].items()},
                cost_seconds=rec["cost_seconds"],
            ))
            errors[(rec["series_id"], rec["pool"])] = tuple(rec["point_errors"])
        return BenchReport(
            meta=payload["meta"],
            pools=tuple(payload["pools"]),
            records=records,
            point_errors=errors,
            skips=list(payload.get("skips", [])),
            aggregates=payload.get("aggregates", {}),
            dm=payload.get("dm", {}),
        )

    @staticmethod
    def load(path) -> "BenchReport":
        with open(path, "r", encoding="utf-8") as fh:
            return BenchReport.from_payload(json.load(fh))


def canonical_payload(payload: dict) -> str:
    """Serialized report with timing fields and environment metadata removed;
    two runs that differ only in scheduling compare equal on this form."""
    import copy

    p = copy.deepcopy(payload)
    meta = p.get("meta", {})
    for key in ("host", "workers", "created_utc", "package_version", "python"):
        meta.pop(key, None)
    for rec in p.get("records", []):
        rec["cost_seconds"] = 0.0
    for agg in p.get("aggregates", {}).values():
        agg["cost_mean_seconds"] = 0.0
        agg.pop("cost_total_seconds", None)
    return json.dumps(p, sort_keys=True)


def _dataset_digest(dataset: Dataset) -> str:
    hasher = hashlib.sha256()
    for s in dataset:
        hasher.update(s.id.encode("utf-8"))
        hasher.update(np.int64(s.period_s).tobytes())
        hasher.update(np.int64(s.horizon_h).tobytes())
        hasher.update(np.asarray(s.values, dtype=np.float64).tobytes())
    return hasher.hexdigest()


def _emit_progress(event: dict, stream=None) -> None:
    stream = stream if stream is not None else sys.stderr
    stream.write(json.dumps(event, sort_keys=True) + "\n")
    stream.flush()


def _build_aggregates(cfg: ExperimentConfig, pools, records_by_pool) -> dict:
    aggregates = {}
    for label in pools:
        recs = records_by_pool.get(label, [])
        if not recs:
            aggregates[label] = {"n_records": 0}
            continue
        agg = {
            "n_records": len(recs),
            "mase_mean": float(np.mean([r.mase for r in recs])),
            "msis_mean": {f"{lv:g}": float(np.mean([r.msis[lv] for r in recs]))
                          for lv in cfg.levels},
            "coverage": {f"{lv:g}": calibration(recs, lv) for lv in cfg.levels},
            "cost_mean_seconds": float(np.mean([r.cost_seconds for r in recs])),
            "cost_total_seconds": float(np.sum([r.cost_seconds for r in recs])),
        }
        aggregates[label] = agg
    return aggregates


def _build_dm_matrix(cfg: ExperimentConfig, pools, records_by_pool, point_errors) -> dict:
    dm = {}
    for i in range(len(pools)):
        for j in range(i + 1, len(pools)):
            a, b = pools[i], pools[j]
            ids = sorted(
                {r.series_id for r in records_by_pool.get(a, [])}
                & {r.series_id for r in records_by_pool.get(b, [])}
            )
            if not ids:
                continue
            h_max = max(len(point_errors[(sid, a)]) for sid in ids)
            cells = []
            for step in range(1, h_max + 1):
                ea, eb = [], []
                for sid in ids:
                    pe_a = point_errors[(sid, a)]
                    pe_b = point_errors[(sid, b)]
                    if len(pe_a) >= step and len(pe_b) >= step:
                        ea.append(pe_a[step - 1])
                        eb.append(pe_b[step - 1])
                if len(ea) < max(4, step + 1):
                    cells.append({"h": step, "stat": None, "p": None,
                                  "better": None, "note": "insufficient data"})
                    continue
                try:
                    stat, p = dm_test_modified(ea, eb, step, loss="absolute")
                except PoolcastError:
                    cells.append({"h": step, "stat": 0.0, "p": 1.0,
                                  "better": None, "note": "no difference"})
                    continue
                better = None
                if p < DM_SIGNIFICANCE:
                    better = a if stat < 0 else b
                cells.append({"h": step, "stat": stat, "p": p, "better": better})
            dm[f"{a}|{b}"] = cells
    return dm


def _warm_kernels() -> None:
    """Touch every jitted code path once so compile/cache-load time never
    lands in a record's cost_seconds."""
    from .ets.models import parse_descriptor

    y = np.array([10.0, 12.0, 11.0, 13.0, 12.0, 14.0, 13.0, 15.0, 14.0, 16.0,
                  15.0, 17.0, 16.0, 18.0, 17.0, 19.0])
    fit = ets_fit(y, 1, parse_descriptor("ANN"))
    ets_forecast(fit, 2, levels=(0.9,), paths=50, seed=0)
    try:
        fit_m = ets_fit(y, 4, parse_descriptor("MMN"))
        ets_forecast(fit_m, 2, levels=(0.9,), paths=50, seed=0)
    except PoolcastError:
        pass
    try:
        best, _ = arima_search_exhaustive(y, 1, 1, "aicc", d=0)
        arima_forecast(best, 2, levels=(0.9,))
    except PoolcastError:
        pass


def run_benchmark(config: ExperimentConfig, dataset: Dataset | None = None, *,
                  progress_stream=None) -> BenchReport:
    """Evaluate every configured pool on every series of the dataset."""
    if dataset is None:
        if config.dataset_path is None:
            raise ConfigError("either a dataset or a dataset_path is required")
        dataset = load_dataset(config.dataset_path, config.dataset_format)
    if len(dataset) == 0:
        raise ConfigError("dataset is empty")
    _warm_kernels()

    tasks = [(series, label, config) for label in config.pools for series in dataset]
    results = []
    if config.workers == 1:
        for task in tasks:
            results.append(_evaluate_task(task))
            _stream_result(results[-1], progress_stream)
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            pending = {pool.submit(_evaluate_task, task) for task in tasks}
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    results.append(fut.result())
                    _stream_result(results[-1], progress_stream)

    records_by_pool: dict[str, list[EvaluationRecord]] = {p: [] for p in config.pools}
    point_errors: dict[tuple[str, str], tuple[float, ...]] = {}
    skips: list[dict] = []
    for sid, label, out, err in results:
        if out is None:
            skips.append({"series_id": sid, "pool": label, "reason": err})
        else:
            records_by_pool[label].append(out["record"])
            point_errors[(sid, label)] = out["point_errors"]
    for label in config.pools:
        records_by_pool[label].sort(key=lambda r: r.series_id)
    skips.sort(key=lambda s: (s["pool"], s["series_id"]))

    records = [r for label in config.pools for r in records_by_pool[label]]
    aggregates = _build_aggregates(config, config.pools, records_by_pool)
    dm = _build_dm_matrix(config, config.pools, records_by_pool, point_errors)

    meta = {
        "host": socket.gethostname() or platform.node(),
        "workers": config.workers,
        "seed": config.seed,
        "criterion": config.criterion,
        "aicc_form": config.aicc_form,
        "msis_form": config.msis_form,
        "levels": [float(lv) for lv in config.levels],
        "paths": config.paths,
        "dataset_digest": _dataset_digest(dataset),
        "dataset_path": config.dataset_path,
        "n_series": len(dataset),
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "package_version": _pkg_version,
        "python": platform.python_version(),
    }
    return BenchReport(meta=meta, pools=config.pools, records=records,
                       point_errors=point_errors, skips=skips,
                       aggregates=aggregates, dm=dm)


def _stream_result(result, stream) -> None:
    sid, label, out, err = result
    if err is not None:
        _emit_progress({"event": "skip", "series_id": sid, "pool": label,
                        "reason": err}, stream)
    else:
        _emit_progress({"event": "record", "series_id": sid, "pool": label}, stream)


def write_records_csv(report: BenchReport, path) -> None:
    """Flat per-series records; numbers rendered at 6 significant digits."""
    levels = sorted({lv for r in report.records for lv in r.msis})
    with open(path, "w", encoding="utf-8") as fh:
        header = ["series_id", "pool", "selected_model", "criterion_value", "mase"]
        header += [f"msis_{lv:g}" for lv in levels]
        header += [f"coverage_{lv:g}" for lv in levels]
        header += ["cost_seconds"]
        fh.write(",".join(header) + "\n")
        for r in report.records:
            row = [r.series_id, r.pool_label, r.selected_model,
                   f"{r.criterion_value:.6g}", f"{r.mase:.6g}"]
            for lv in levels:
                row.append(f"{r.msis[lv]:.6g}" if lv in r.msis else "")
            for lv in levels:
                if lv in r.covered and r.covered[lv]:
                    row.append(f"{np.mean(r.covered[lv]):.6g}")
                else:
                    row.append("")
            row.append(f"{r.cost_seconds:.6g}")
            fh.write(",".join(row) + "\n")


@dataclass
class PoolEnumerationResult:
    seasonal: bool
    total_pools: int
    fit_count: int
    n_series: int
    size_summary: dict[int, dict]
    named_pool_stats: dict[str, dict]
    pool_scores: list[tuple[tuple[str, ...], float, float]] | None

    def to_payload(self) -> dict:
        return {
            "seasonal": self.seasonal,
            "total_pools": self.total_pools,
            "fit_count": self.fit_count,
            "n_series": self.n_series,
            "size_summary": {str(k): v for k, v in sorted(self.size_summary.items())},
            "named_pool_stats": self.named_pool_stats,
        }


def run_pool_enumeration(config: ExperimentConfig, dataset: Dataset, *,
                         keep_pool_scores: bool = False,
                         progress_stream=None) -> PoolEnumerationResult:
    """Score every balanced ETS pool on the dataset.

    Each applicable model is fitted and forecast exactly once per series;
    every candidate pool is then scored by replaying only the
    criterion-argmin over the cached fits.
    """
    periods = {s.period_s for s in dataset}
    if len(periods) != 1:
        raise ConfigError("pool enumeration needs a single-frequency dataset")
    seasonal = periods.pop() > 1
    models = sort_canonical(ets_pool("all", seasonal))
    n_models = len(models)
    col = {spec: i for i, spec in enumerate(models)}

    crit = np.full((len(dataset), n_models), np.inf)
    mase_m = np.full((len(dataset), n_models), np.inf)
    msis_m = np.full((len(dataset), n_models), np.inf)
    fit_count = 0
    level = 0.95
    for si, series in enumerate(dataset):
        split = split_fixed_origin(series)
        positive = bool(np.min(split.train) > 0)
        seed = series_seed(config.seed, series.id)
        for spec in models:
            if not positive and (spec.error == "M" or spec.seasonal == "M"):
                continue
            try:
                fit = ets_fit(split.train, series.period_s, spec,
                              aicc_form=config.aicc_form)
                fit_count += 1
                fc = ets_forecast(fit, series.horizon_h, levels=(level,),
                                  paths=config.paths, seed=seed)
            except PoolcastError:
                continue
            j = col[spec]
            crit[si, j] = fit.criteria[config.criterion]
            try:
                mase_m[si, j] = mase(split.train, split.test, fc.point, series.period_s)
                lo, up = fc.intervals[level]
                msis_m[si, j] = msis(split.train, split.test, lo, up, 1.0 - level,
                                     series.period_s, form=config.msis_form)
            except PoolcastError:
                crit[si, j] = np.inf
        _emit_progress({"event": "cached", "series_id": series.id}, progress_stream)

    size_values: dict[int, list[float]] = {}
    pool_scores: list[tuple[tuple[str, ...], float, float]] = []
    named_sets = {
        name: tuple(sort_canonical(ets_pool(name, seasonal)))
        for name in ("all", "no_mult_trend", "damped", "match_error_seasonal", "reduced")
    }
    named_stats: dict[str, dict] = {name: {} for name in named_sets}
    total = 0
    better_than_named = {name: 0 for name in named_sets}
    named_scores: dict[str, float] = {}

    def score_pool(members: tuple[EtsModelSpec, ...]) -> tuple[float, float]:
        idx = [col[m] for m in members]
        sub = crit[:, idx]
        rows = np.where(np.isfinite(sub).any(axis=1))[0]
        if len(rows) == 0:
            return math.inf, math.inf
        choice = np.argmin(sub[rows], axis=1)
        mse_vals = mase_m[rows, [idx[c] for c in choice]]
        msi_vals = msis_m[rows, [idx[c] for c in choice]]
        return float(np.mean(mse_vals)), float(np.mean(msi_vals))

    for name, members in named_sets.items():
        named_scores[name] = score_pool(members)[0]

    for members in enumerate_balanced_pools(set(models), seasonal):
        m_avg, i_avg = score_pool(members)
        total += 1
        size_values.setdefault(len(members), []).append(m_avg)
        for name, sc in named_scores.items():
            if m_avg < sc:
                better_than_named[name] += 1
        if keep_pool_scores:
            pool_scores.append((tuple(m.descriptor for m in members), m_avg, i_avg))

    size_summary = {}
    for size, vals in sorted(size_values.items()):
        arr = np.asarray(vals)
        arr = arr[np.isfinite(arr)]
        if len(arr) == 0:
            continue
        size_summary[size] = {
            "count": int(len(vals)),
            "min": float(arr.min()),
            "q1": float(np.quantile(arr, 0.25)),
            "median": float(np.quantile(arr, 0.5)),
            "q3": float(np.quantile(arr, 0.75)),
            "max": float(arr.max()),
        }
    for name, members in named_sets.items():
        m_avg, i_avg = score_pool(members)
        named_stats[name] = {
            "size": len(members),
            "mase_mean": m_avg,
            "msis_mean": i_avg,
            "rank": better_than_named[name] + 1,
            "models": [m.descriptor for m in members],
        }
    return PoolEnumerationResult(
        seasonal=seasonal,
        total_pools=total,
        fit_count=fit_count,
        n_series=len(dataset),
        size_summary=size_summary,
        named_pool_stats=named_stats,
        pool_scores=pool_scores if keep_pool_scores else None,
    )


def report_fva(reports: list[BenchReport], ordering: list[str] | None = None) -> dict:
    """FVA/CCR table across reports over the same dataset.

    Rows follow ``ordering`` (pool labels, simplest first); each row carries
    FVA and CCR versus every earlier row.
    """
    if len(reports) < 2:
        raise DatasetMismatch("need at least two reports to compare")
    digests = {r.meta.get("dataset_digest") for r in reports}
    if len(digests) != 1:
        raise DatasetMismatch("reports were produced from different datasets")

    stats: dict[str, tuple[float, float]] = {}
    for rep in reports:
        for label in rep.pools:
            agg = rep.aggregates.get(label, {})
            if agg.get("n_records"):
                stats[label] = (agg["mase_mean"], agg["cost_mean_seconds"])
    labels = ordering if ordering else list(stats)
    missing = [l for l in labels if l not in stats]
    if missing:
        raise DatasetMismatch(f"no records for pools: {missing}")

    rows = []
    for i, label in enumerate(labels):
        m_i, c_i = stats[label]
        row = {"pool": label, "mase": m_i, "cost_seconds": c_i,
               "fva_vs": {}, "ccr_vs": {}}
        for j in range(i):
            m_j, c_j = stats[labels[j]]
            row["fva_vs"][labels[j]] = fva(m_j, m_i)
            row["ccr_vs"][labels[j]] = ccr(c_j, c_i)
        rows.append(row)
    return {"ordering": list(labels), "rows": rows}


def render_fva_text(table: dict) -> str:
    labels = table["ordering"]
    lines = []
    header = f"{'pool':<28}{'MASE':>9}{'cost(s)':>10}"
    for j, lab in enumerate(labels[:-1], start=1):
        header += f"{'FVA vs ' + str(j):>12}"
    for j, lab in enumerate(labels[:-1], start=1):
        header += f"{'CCR vs ' + str(j):>12}"
    lines.append(header)
    for i, row in enumerate(table["rows"]):
        line = f"{row['pool']:<28}{row['mase']:>9.3f}{row['cost_seconds']:>10.3f}"
        for j in range(len(labels) - 1):
            if j < i:
                line += f"{row['fva_vs'][labels[j]]:>11.1f}%"
            else:
                line += f"{'':>12}"
        for j in range(len(labels) - 1):
            if j < i:
                line += f"{row['ccr_vs'][labels[j]]:>11.1f}%"
            else:
                line += f"{'':>12}"
        lines.append(line)
    return "\n".join(lines)


def write_fva_csv(table: dict, path) -> None:
    labels = table["ordering"]
    with open(path, "w", encoding="utf-8") as fh:
        header = ["pool", "mase", "cost_seconds"]
        header += [f"fva_vs_{lab}" for lab in labels[:-1]]
        header += [f"ccr_vs_{lab}" for lab in labels[:-1]]
        fh.write(",".join(header) + "\n")
        for row in table["rows"]:
            cells = [row["pool"], f"{row['mase']:.6g}", f"{row['cost_seconds']:.6g}"]
            for lab in labels[:-1]:
                cells.append(f"{row['fva_vs'][lab]:.6g}" if lab in row["fva_vs"] else "")
            for lab in labels[:-1]:
                cells.append(f"{row['ccr_vs'][lab]:.6g}" if lab in row["ccr_vs"] else "")
            fh.write(",".join(cells) + "\n")
