"""Maximum-likelihood estimation of ETS models.

The likelihood is the Gaussian single-source-of-innovations form; for
multiplicative error the one-step means enter as a Jacobian term. Smoothing
parameters, the damping factor, and the initial states are estimated jointly
with a derivative-free simplex search (one run plus two restarts from
perturbed starts, 1e-8 objective tolerance, 2000 evaluations each).
"""

from __future__ import annotations

import math
import time

import numpy as np

from .._optim import KIND_ETS, minimize_simplex
from ..criteria import all_criteria
from ..errors import (
    DegenerateSeries,
    InapplicableModel,
    InsufficientData,
    NonPositiveData,
    OptimizationFailed,
)
from .. import _ets_kernels as _kernels
from .models import EtsFit, EtsModelSpec, canonical_index, is_applicable, parameter_count

_PENALTY = 1e10

_CODES = {"A": 1, "M": 2, "N": 0}


def _component_codes(spec: EtsModelSpec) -> tuple[int, int, int]:
    error = 0 if spec.error == "A" else 1
    trend = 0 if spec.trend == "N" else (1 if spec.trend in ("A", "Ad") else 2)
    season = _CODES[spec.seasonal]
    return error, trend, season


def seasonal_indices(y: np.ndarray, m: int, multiplicative: bool) -> np.ndarray:
    """Seasonal index estimates from a classical decomposition of the first cycles."""
    ncyc = min(len(y) // m, 5)
    w = y[: ncyc * m]
    idx = np.zeros(m)
    counts = np.zeros(m)
    if len(w) >= m + 1:
        # centered moving average of order m (2 x m MA when m is even)
        half = m // 2
        ma = np.full(len(w), np.nan)
        csum = np.concatenate(([0.0], np.cumsum(w)))
        if m % 2 == 0:
            for t in range(half, len(w) - half):
                inner = (csum[t + half] - csum[t - half]) / m
                outer = (csum[t + half + 1] - csum[t - half + 1]) / m
                ma[t] = 0.5 * (inner + outer)
        else:
            for t in range(half, len(w) - half):
                ma[t] = (csum[t + half + 1] - csum[t - half]) / m
        for t in range(len(w)):
            if np.isfinite(ma[t]) and (not multiplicative or abs(ma[t]) > 1e-12):
                pos = t % m
                idx[pos] += (w[t] / ma[t]) if multiplicative else (w[t] - ma[t])
                counts[pos] += 1
    if np.any(counts == 0):
        base = np.mean(w)
        for pos in range(m):
            vals = w[pos::m]
            if multiplicative:
                idx[pos] = np.mean(vals) / base if abs(base) > 1e-12 else 1.0
            else:
                idx[pos] = np.mean(vals) - base
            counts[pos] = 1
    idx /= counts
    if multiplicative:
        idx = np.maximum(idx, 0.01)
        idx /= idx.mean()
    else:
        idx -= idx.mean()
    return idx


def _initial_states(y: np.ndarray, m: int, spec: EtsModelSpec):
    """Heuristic starting states: seasonal indices from decomposition, then a
    linear fit on the first up-to-ten seasonally adjusted points."""
    if spec.has_seasonal:
        idx_by_pos = seasonal_indices(y, m, spec.seasonal == "M")
        reps = int(np.ceil(len(y) / m))
        tiled = np.tile(idx_by_pos, reps)[: len(y)]
        y_sa = y / tiled if spec.seasonal == "M" else y - tiled
        # state array: position 0 holds s_0; position m-1 holds the index
        # aligned with the first observation, so the array is idx reversed
        s_state = idx_by_pos[::-1].copy()
    else:
        y_sa = y
        s_state = np.zeros(1)
    p = min(10, len(y_sa))
    t = np.arange(1.0, p + 1.0)
    if p >= 2:
        slope, intercept = np.polyfit(t, y_sa[:p], 1)
    else:
        slope, intercept = 0.0, float(y_sa[0])
    l0 = float(intercept)
    if spec.multiplicative_trend:
        if abs(l0) > 1e-8:
            b0 = max(1.0 + slope / l0, 1e-4)
        else:
            b0 = 1.0
        l0 = max(l0, 1e-8) if l0 <= 0 else l0
    elif spec.has_trend:
        b0 = float(slope)
    else:
        b0 = 0.0
        l0 = float(intercept + slope * (p + 1) / 2.0) if p >= 2 else l0
    if (spec.error == "M" or spec.seasonal == "M") and l0 <= 0:
        l0 = max(float(np.mean(y[:m])) if m > 1 else float(y[0]), 1e-8)
    return l0, b0, s_state


def _pack(spec: EtsModelSpec, m: int, alpha, beta, gamma, phi, l0, b0, s_state) -> np.ndarray:
    x = [alpha]
    if spec.has_trend:
        x.append(beta)
    if spec.has_seasonal:
        x.append(gamma)
    if spec.damped:
        x.append(phi)
    x.append(l0)
    if spec.has_trend:
        x.append(b0)
    if spec.has_seasonal:
        x.extend(s_state[: m - 1])
    return np.asarray(x, dtype=np.float64)


def _unpack(x: np.ndarray, spec: EtsModelSpec, m: int):
    i = 0
    alpha = x[i]; i += 1
    beta = 0.0
    gamma = 0.0
    phi = 1.0
    if spec.has_trend:
        beta = x[i]; i += 1
    if spec.has_seasonal:
        gamma = x[i]; i += 1
    if spec.damped:
        phi = x[i]; i += 1
    l0 = x[i]; i += 1
    b0 = 1.0 if spec.multiplicative_trend else 0.0
    if spec.has_trend:
        b0 = x[i]; i += 1
    if spec.has_seasonal:
        s_free = x[i:]
        s_state = np.empty(m)
        s_state[: m - 1] = s_free
        if spec.seasonal == "M":
            s_state[m - 1] = m - np.sum(s_free)
        else:
            s_state[m - 1] = -np.sum(s_free)
    else:
        s_state = np.zeros(1)
    return alpha, beta, gamma, phi, l0, b0, s_state


def _objective_args(spec: EtsModelSpec, m: int) -> np.ndarray:
    error, trend, season = _component_codes(spec)
    pos_level = spec.error == "M" or spec.seasonal == "M" or spec.multiplicative_trend
    return np.array(
        [m, error, trend, season,
         int(spec.has_trend), int(spec.has_seasonal), int(spec.damped),
         int(spec.multiplicative_trend), int(pos_level)],
        dtype=np.int64,
    )


def _perturb(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    scale = np.maximum(np.abs(x), 0.05)
    return x + rng.standard_normal(x.shape) * 0.1 * scale


def ets_fit(train, period_s: int, spec: EtsModelSpec, *,
            aicc_form: str = "standard") -> EtsFit:
    """Fit one ETS model by maximum likelihood.

    Raises InapplicableModel for the unstable grey combinations,
    NonPositiveData when a multiplicative component meets data <= 0,
    DegenerateSeries for constant data with multiplicative seasonality,
    and InsufficientData when the series cannot support the parameter count.
    """
    t_start = time.perf_counter()
    y = np.ascontiguousarray(train, dtype=np.float64)
    m = int(period_s)
    if not is_applicable(spec):
        raise InapplicableModel(f"{spec.descriptor} is not an applicable ETS form")
    if spec.has_seasonal and m < 2:
        raise InapplicableModel(f"{spec.descriptor} requires period_s >= 2, got {m}")
    n = len(y)
    k = parameter_count(spec, m if spec.has_seasonal else 1)
    if n < k + 2:
        raise InsufficientData(f"{spec.descriptor}: need n >= {k + 2}, got {n}")
    if (spec.error == "M" or spec.seasonal == "M") and np.min(y) <= 0:
        raise NonPositiveData(f"{spec.descriptor} requires strictly positive data")
    if spec.seasonal == "M" and np.ptp(y) == 0.0:
        raise DegenerateSeries(f"{spec.descriptor} is unidentified on a constant series")

    l0, b0, s_state = _initial_states(y, m, spec)
    x0 = _pack(spec, m, 0.3, 0.05, 0.05, 0.9, l0, b0, s_state)
    iargs = _objective_args(spec, m)

    rng = np.random.default_rng(97 + canonical_index(spec))
    best_x = None
    best_obj = np.inf
    start = x0
    for _ in range(3):
        xr, fr, _nfev = minimize_simplex(KIND_ETS, start, y, iargs,
                                         1e-8, 1e-8, 2000)
        if fr < best_obj:
            best_obj = float(fr)
            best_x = xr
        start = _perturb(best_x if best_x is not None else x0, rng)
    if best_x is None or best_obj >= _PENALTY:
        raise OptimizationFailed(f"{spec.descriptor}: no feasible optimum found")

    alpha, beta, gamma, phi, l0, b0, s_state = _unpack(best_x, spec, m)
    error, trend, season = _component_codes(spec)
    ok, sse, sumlog, fitted, resid, lf, bf, sf = _kernels.ets_filter(
        y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s_state
    )
    if not ok:
        raise OptimizationFailed(f"{spec.descriptor}: optimum does not evaluate")
    return _assemble_fit(spec, m, alpha, beta, gamma, phi, l0, b0, s_state,
                         sse, sumlog, fitted, resid, lf, bf, sf, n, k,
                         aicc_form, time.perf_counter() - t_start)


def ets_evaluate(train, period_s: int, spec: EtsModelSpec, *,
                 alpha: float, beta: float | None = None, gamma: float | None = None,
                 phi: float | None = None, initial_level: float | None = None,
                 initial_trend: float | None = None, initial_seasonal=None,
                 aicc_form: str = "standard") -> EtsFit:
    """Evaluate an ETS model at pinned parameters (no optimization).

    Unspecified initial states fall back to the heuristic estimates. Useful
    for constructing true-model fits and for pinned-parameter diagnostics.
    """
    t_start = time.perf_counter()
    y = np.ascontiguousarray(train, dtype=np.float64)
    m = int(period_s)
    if not is_applicable(spec):
        raise InapplicableModel(f"{spec.descriptor} is not an applicable ETS form")
    l0_h, b0_h, s_h = _initial_states(y, m, spec)
    l0 = l0_h if initial_level is None else float(initial_level)
    b0 = b0_h if initial_trend is None else float(initial_trend)
    if initial_seasonal is not None:
        s_state = np.asarray(initial_seasonal, dtype=np.float64)
    else:
        s_state = s_h
    beta_v = float(beta) if beta is not None else 0.0
    gamma_v = float(gamma) if gamma is not None else 0.0
    phi_v = float(phi) if phi is not None else 1.0
    error, trend, season = _component_codes(spec)
    ok, sse, sumlog, fitted, resid, lf, bf, sf = _kernels.ets_filter(
        y, m, error, trend, season, float(alpha), beta_v, gamma_v, phi_v, l0, b0, s_state
    )
    if not ok:
        raise OptimizationFailed(f"{spec.descriptor}: recursion failed at the given parameters")
    n = len(y)
    k = parameter_count(spec, m if spec.has_seasonal else 1)
    return _assemble_fit(spec, m, float(alpha), beta_v, gamma_v, phi_v, l0, b0, s_state,
                         sse, sumlog, fitted, resid, lf, bf, sf, n, k,
                         aicc_form, time.perf_counter() - t_start)


def _assemble_fit(spec, m, alpha, beta, gamma, phi, l0, b0, s_state,
                  sse, sumlog, fitted, resid, lf, bf, sf, n, k,
                  aicc_form, seconds) -> EtsFit:
    sigma2 = max(sse / n, 1e-300)
    logL = -0.5 * (n * math.log(2.0 * math.pi * sigma2) + n) - sumlog
    criteria = all_criteria(logL, k, n, aicc_form=aicc_form)
    seasonal_init = s_state.copy() if spec.has_seasonal else None
    seasonal_fin = sf.copy() if spec.has_seasonal else None
    for arr in (fitted, resid):
        arr.setflags(write=False)
    return EtsFit(
        spec=spec,
        period_s=m,
        alpha=float(alpha),
        beta=float(beta) if spec.has_trend else None,
        gamma=float(gamma) if spec.has_seasonal else None,
        phi=float(phi) if spec.damped else None,
        initial_level=float(l0),
        initial_trend=float(b0) if spec.has_trend else None,
        initial_seasonal=seasonal_init,
        final_level=float(lf),
        final_trend=float(bf) if spec.has_trend else None,
        final_seasonal=seasonal_fin,
        sigma2=float(sigma2),
        logL=float(logL),
        k=int(k),
        n=int(n),
        criteria=criteria,
        fitted=fitted,
        residuals=resid,
        fit_seconds=float(seconds),
    )
