"""Accuracy, uncertainty, calibration, significance, and cost-analysis metrics.

MASE and MSIS both scale by the in-sample one-step mean absolute error of
the seasonal naive method, so values are comparable across series and can
be averaged arithmetically (deliberately untrimmed: explosive forecasts are
allowed to dominate the mean, as they do in practice).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import t as student_t

from .errors import DegenerateVariance, IdMismatch, ZeroDenominator
from .ets.models import EtsModelSpec
from .pools import PROFILE_CLASSES, profile_class

DEFAULT_CALIBRATION_LEVELS = (0.80, 0.85, 0.90, 0.95, 0.99)


def seasonal_naive_denominator(train, period_s: int) -> float:
    y = np.asarray(train, dtype=np.float64)
    n = len(y)
    s = int(period_s)
    if n <= s:
        raise ZeroDenominator(f"need train length > period_s, got {n} <= {s}")
    denom = float(np.mean(np.abs(y[s:] - y[:-s])))
    if denom <= 0.0:
        raise ZeroDenominator("in-sample seasonal-naive errors are all zero")
    return denom


def mase(train, test, forecast_point, period_s: int) -> float:
    """Mean absolute error of the forecasts scaled by the seasonal-naive
    in-sample one-step MAE."""
    test = np.asarray(test, dtype=np.float64)
    f = np.asarray(forecast_point, dtype=np.float64)
    if test.shape != f.shape:
        raise ValueError("test and forecast lengths differ")
    denom = seasonal_naive_denominator(train, period_s)
    return float(np.mean(np.abs(test - f))) / denom


def interval_score_W(l: float, u: float, y: float, alpha: float) -> float:
    """Width plus 2/alpha-weighted penalties for actuals outside [l, u]."""
    if u < l:
        raise ValueError("upper bound below lower bound")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    w = u - l
    if y < l:
        w += (2.0 / alpha) * (l - y)
    elif y > u:
        w += (2.0 / alpha) * (y - u)
    return w


def msis(train, test, lower, upper, alpha: float, period_s: int, *,
         form: str = "mean") -> float:
    """Scaled interval score over the holdout steps.

    form="mean" averages W over the horizon (the default); form="sum"
    accumulates it instead.
    """
    if form not in ("mean", "sum"):
        raise ValueError(f"form must be 'mean' or 'sum', got {form!r}")
    test = np.asarray(test, dtype=np.float64)
    lo = np.asarray(lower, dtype=np.float64)
    up = np.asarray(upper, dtype=np.float64)
    if not (test.shape == lo.shape == up.shape):
        raise ValueError("test/lower/upper lengths differ")
    denom = seasonal_naive_denominator(train, period_s)
    scores = [interval_score_W(lo[i], up[i], test[i], alpha) for i in range(len(test))]
    total = float(np.sum(scores))
    if form == "mean":
        total /= len(test)
    return total / denom


@dataclass(frozen=True)
class EvaluationRecord:
    """Per-series outcome of one pool run."""

    series_id: str
    pool_label: str
    selected_model: str
    criterion_value: float
    mase: float
    msis: dict[float, float]
    covered: dict[float, tuple[bool, ...]]
    cost_seconds: float

    def __post_init__(self):
        if self.mase < 0 or any(v < 0 for v in self.msis.values()):
            raise ValueError("mase and msis must be non-negative")
        if self.cost_seconds < 0:
            raise ValueError("cost_seconds must be non-negative")


def coverage_flags(test, lower, upper) -> tuple[bool, ...]:
    test = np.asarray(test, dtype=np.float64)
    return tuple(bool(lower[i] <= test[i] <= upper[i]) for i in range(len(test)))


def calibration(records: list[EvaluationRecord], level: float) -> dict[str, object]:
    """Per-horizon and overall fraction of actuals inside the intervals."""
    if not records:
        raise ValueError("calibration needs at least one record")
    h_max = max(len(r.covered[level]) for r in records)
    hits = np.zeros(h_max)
    counts = np.zeros(h_max)
    for r in records:
        flags = r.covered[level]
        for i, flag in enumerate(flags):
            hits[i] += flag
            counts[i] += 1
    per_horizon = [float(hits[i] / counts[i]) if counts[i] else math.nan for i in range(h_max)]
    overall = float(hits.sum() / counts.sum())
    return {"per_horizon": per_horizon, "overall": overall}


def dm_test_modified(errors_a, errors_b, h: int, loss: str = "absolute") -> tuple[float, float]:
    """Modified Diebold-Mariano test for h-step-ahead forecasts.

    errors_a/errors_b are forecast errors (actual minus forecast) at a fixed
    horizon step across series/origins. Uses a truncation lag of h-1 for the
    long-run variance, the Harvey-Leybourne-Newbold small-sample multiplier,
    and a two-sided p-value from the t distribution with m-1 degrees of
    freedom. Raises DegenerateVariance when the loss differentials carry no
    variance.
    """
    if loss not in ("absolute", "squared"):
        raise ValueError(f"loss must be 'absolute' or 'squared', got {loss!r}")
    ea = np.asarray(errors_a, dtype=np.float64)
    eb = np.asarray(errors_b, dtype=np.float64)
    if ea.shape != eb.shape:
        raise ValueError("error sequences must have equal length")
    m = len(ea)
    if m < max(4, h + 1):
        raise ValueError(f"need at least max(4, h+1) = {max(4, h + 1)} observations, got {m}")
    if loss == "absolute":
        d = np.abs(ea) - np.abs(eb)
    else:
        d = ea ** 2 - eb ** 2
    dbar = float(np.mean(d))
    dc = d - dbar
    lrv = float(np.mean(dc * dc))
    for k in range(1, h):
        gamma_k = float(np.sum(dc[k:] * dc[:-k])) / m
        lrv += 2.0 * gamma_k
    if lrv <= 0.0:
        raise DegenerateVariance("loss differentials have no usable variance")
    stat = dbar / math.sqrt(lrv / m)
    multiplier = math.sqrt((m + 1.0 - 2.0 * h + h * (h - 1.0) / m) / m)
    stat *= multiplier
    p_value = 2.0 * float(student_t.sf(abs(stat), df=m - 1))
    return stat, p_value


def fva(metric_simple: float, metric_complex: float) -> float:
    """Percentage accuracy improvement of the complex step over the simple one."""
    if metric_simple <= 0:
        raise ValueError("metric_simple must be positive")
    return 100.0 * (metric_simple - metric_complex) / metric_simple


def ccr(cost_simple: float, cost_complex: float) -> float:
    """Percentage cost reduction of the complex step relative to the simple one."""
    if cost_simple <= 0:
        raise ValueError("cost_simple must be positive")
    return 100.0 * (cost_simple - cost_complex) / cost_simple


def monetize(total_cpu_seconds: float, rate_per_cpu_hour: float) -> float:
    if total_cpu_seconds < 0 or rate_per_cpu_hour < 0:
        raise ValueError("inputs must be non-negative")
    return total_cpu_seconds / 3600.0 * rate_per_cpu_hour


def profile_frequencies(selections: dict[str, EtsModelSpec]) -> dict[str, float]:
    """Percentage of series whose selected model falls in each profile class."""
    if not selections:
        raise ValueError("no selections given")
    counts = {c: 0 for c in PROFILE_CLASSES}
    for spec in selections.values():
        counts[profile_class(spec)] += 1
    total = len(selections)
    return {c: 100.0 * counts[c] / total for c in PROFILE_CLASSES}


def order_change_frequencies(selections_k: dict[str, "object"],
                             selections_km1: dict[str, "object"]) -> dict[str, float]:
    """Percentage of series whose selected (p, q, P, Q) changed between two
    consecutive maximum-order pools."""
    if set(selections_k) != set(selections_km1):
        raise IdMismatch("selection maps cover different series ids")
    if not selections_k:
        raise ValueError("no selections given")
    terms = ("p", "q", "P", "Q")
    counts = {t: 0 for t in terms}
    any_count = 0
    for sid, order_k in selections_k.items():
        order_p = selections_km1[sid]
        changed = False
        for t_ in terms:
            if getattr(order_k, t_) != getattr(order_p, t_):
                counts[t_] += 1
                changed = True
        if changed:
            any_count += 1
    total = len(selections_k)
    out = {t_: 100.0 * counts[t_] / total for t_ in terms}
    out["any"] = 100.0 * any_count / total
    return out
