"""Deterministic synthetic corpora shaped like the M3 frequency subsets.

Real M-competition data cannot be redistributed here, so the benchmark
tests and examples run on generated series that mimic the relevant traits:
short positive trending yearly series, and longer quarterly/monthly series
with multiplicative seasonality of varying strength. Generators are fully
seeded; identical arguments produce identical datasets.
"""

from __future__ import annotations

import numpy as np

from .core import Dataset, TimeSeries

_CATEGORIES = ("MICRO", "INDUSTRY", "MACRO", "FINANCE", "DEMOGRAPHIC", "OTHER")


def _series_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def yearly_corpus(n_series: int = 645, seed: int = 20240101) -> Dataset:
    """Short positive yearly series in three regimes: noisy local level,
    damped trend, and growth with a structural break. In-sample growth does
    not reliably persist into the holdout, so extrapolative trend forms
    overshoot the way they do on real business data."""
    series = []
    for i in range(n_series):
        rng = _series_rng(seed, i)
        n = int(rng.integers(20, 48))
        level = float(rng.lognormal(mean=8.0, sigma=0.8))
        kind = rng.random()
        if kind < 0.30:
            # random-walk level
            steps = 1.0 + rng.uniform(0.01, 0.04) * rng.standard_normal(n)
            y = level * np.cumprod(steps)
        elif kind < 0.65:
            # damped trend: growth that decays toward flat
            phi = rng.uniform(0.80, 0.95)
            b = level * rng.uniform(-0.02, 0.06)
            l = level
            y = np.empty(n)
            for t_ in range(n):
                l = l + phi * b
                b = phi * b
                y[t_] = l
        else:
            # growth with a structural break before or near the origin
            g1 = rng.uniform(0.05, 0.14)
            g2 = rng.uniform(-0.05, 0.02)
            tau = int(n * rng.uniform(0.55, 0.95))
            rates = np.where(np.arange(n) < tau, 1.0 + g1, 1.0 + g2)
            y = level * np.cumprod(rates)
        noise = rng.uniform(0.03, 0.10)
        y = y * (1.0 + noise * rng.standard_normal(n))
        y = np.maximum(y, level * 0.02)
        series.append(TimeSeries(
            id=f"Y{i + 1:04d}", period_s=1, values=y, horizon_h=6,
            category=_CATEGORIES[i % len(_CATEGORIES)],
        ))
    return Dataset(series=tuple(series), frequency_label="yearly")


def _seasonal_pattern(rng: np.random.Generator, m: int, amplitude: float) -> np.ndarray:
    phase = rng.uniform(0.0, 2.0 * np.pi)
    second = rng.uniform(0.0, 0.5)
    base = np.sin(2.0 * np.pi * np.arange(m) / m + phase)
    base += second * np.sin(4.0 * np.pi * np.arange(m) / m + phase * 1.7)
    pattern = 1.0 + amplitude * base / np.max(np.abs(base))
    return pattern / pattern.mean()


def quarterly_corpus(n_series: int = 300, seed: int = 20240102) -> Dataset:
    series = []
    for i in range(n_series):
        rng = _series_rng(seed, i)
        n = int(rng.integers(32, 72))
        y = _seasonal_series(rng, n, m=4)
        series.append(TimeSeries(
            id=f"Q{i + 1:04d}", period_s=4, values=y, horizon_h=8,
            category=_CATEGORIES[i % len(_CATEGORIES)],
        ))
    return Dataset(series=tuple(series), frequency_label="quarterly")


def monthly_corpus(n_series: int = 300, seed: int = 20240103) -> Dataset:
    series = []
    for i in range(n_series):
        rng = _series_rng(seed, i)
        n = int(rng.integers(84, 145))
        y = _seasonal_series(rng, n, m=12)
        series.append(TimeSeries(
            id=f"M{i + 1:04d}", period_s=12, values=y, horizon_h=18,
            category=_CATEGORIES[i % len(_CATEGORIES)],
        ))
    return Dataset(series=tuple(series), frequency_label="monthly")


def _seasonal_series(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    level = float(rng.lognormal(mean=8.0, sigma=0.7))
    t = np.arange(n, dtype=np.float64)
    kind = rng.random()
    if kind < 0.30:
        trend = np.full(n, level)
    elif kind < 0.75:
        slope = level * rng.uniform(-0.004, 0.010)
        trend = level + slope * t
    else:
        g = rng.uniform(0.002, 0.008)
        trend = level * (1.0 + g) ** t
    amplitude = float(rng.uniform(0.0, 0.35))
    pattern = _seasonal_pattern(rng, m, amplitude)
    reps = int(np.ceil(n / m))
    seasonal = np.tile(pattern, reps)[:n]
    noise = rng.uniform(0.015, 0.06)
    y = trend * seasonal * (1.0 + noise * rng.standard_normal(n))
    return np.maximum(y, level * 0.05)
