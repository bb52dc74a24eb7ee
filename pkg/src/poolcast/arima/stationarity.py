"""Unit-root testing and automatic differencing-order selection.

The level-stationarity KPSS statistic with a Bartlett-kernel long-run
variance decides the regular differencing order d (repeated testing at the
5% critical value 0.463, d capped at 2). Seasonal differencing is decided
first, by the seasonal-strength measure from a classical decomposition:
D = 1 when F_s >= 0.64.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import SeriesTooShort

KPSS_CRITICAL_5PCT = 0.463
SEASONAL_STRENGTH_THRESHOLD = 0.64
MAX_REGULAR_DIFFS = 2


def default_lag_window(n: int) -> int:
    return int(math.floor(4.0 * (n / 100.0) ** 0.25))


def kpss_statistic(series, lag_window: int | None = None) -> float:
    """Level-stationarity KPSS statistic.

    A constant series yields 0 by convention (zero partial sums over zero
    long-run variance).
    """
    y = np.asarray(series, dtype=np.float64)
    n = len(y)
    if n < 8:
        raise SeriesTooShort(f"KPSS needs at least 8 observations, got {n}")
    lag = default_lag_window(n) if lag_window is None else int(lag_window)
    e = y - y.mean()
    if np.all(e == 0.0):
        return 0.0
    s = np.cumsum(e)
    eta = float(np.sum(s * s)) / (n * n)
    lrv = float(np.sum(e * e)) / n
    for i in range(1, lag + 1):
        w = 1.0 - i / (lag + 1.0)
        lrv += 2.0 * w * float(np.sum(e[i:] * e[:-i])) / n
    if lrv <= 0.0:
        return 0.0
    return eta / lrv


def _centered_ma(y: np.ndarray, m: int) -> np.ndarray:
    n = len(y)
    ma = np.full(n, np.nan)
    csum = np.concatenate(([0.0], np.cumsum(y)))
    half = m // 2
    if m % 2 == 0:
        for t in range(half, n - half):
            inner = (csum[t + half] - csum[t - half]) / m
            outer = (csum[t + half + 1] - csum[t - half + 1]) / m
            ma[t] = 0.5 * (inner + outer)
    else:
        for t in range(half, n - half):
            ma[t] = (csum[t + half + 1] - csum[t - half]) / m
    return ma


def seasonal_strength(series, period_s: int) -> float:
    """F_s = max(0, 1 - Var(remainder) / Var(remainder + seasonal)) from an
    additive classical decomposition."""
    y = np.asarray(series, dtype=np.float64)
    m = int(period_s)
    if m < 2 or len(y) < 2 * m:
        return 0.0
    trend = _centered_ma(y, m)
    valid = np.isfinite(trend)
    detr = y[valid] - trend[valid]
    pos = np.arange(len(y))[valid] % m
    seas = np.zeros(m)
    for j in range(m):
        vals = detr[pos == j]
        if len(vals):
            seas[j] = vals.mean()
    seas -= seas.mean()
    remainder = detr - seas[pos]
    denom = float(np.var(remainder + seas[pos]))
    if denom <= 0.0 or not np.isfinite(denom):
        return 0.0
    return max(0.0, 1.0 - float(np.var(remainder)) / denom)


def seasonal_difference(y: np.ndarray, period_s: int, times: int = 1) -> np.ndarray:
    out = np.asarray(y, dtype=np.float64)
    for _ in range(times):
        out = out[period_s:] - out[:-period_s]
    return out


def regular_difference(y: np.ndarray, times: int = 1) -> np.ndarray:
    out = np.asarray(y, dtype=np.float64)
    for _ in range(times):
        out = out[1:] - out[:-1]
    return out


def choose_differencing(train, period_s: int) -> tuple[int, int]:
    """Pick (d, D): seasonal strength decides D, repeated KPSS decides d."""
    y = np.asarray(train, dtype=np.float64)
    m = int(period_s)
    D = 0
    if m > 1 and seasonal_strength(y, m) >= SEASONAL_STRENGTH_THRESHOLD:
        D = 1
        y = seasonal_difference(y, m)
    d = 0
    while d < MAX_REGULAR_DIFFS:
        if len(y) < 8:
            raise SeriesTooShort(
                f"series too short for a unit-root test after differencing (n={len(y)})"
            )
        if kpss_statistic(y) <= KPSS_CRITICAL_5PCT:
            break
        y = regular_difference(y)
        d += 1
    return d, D
