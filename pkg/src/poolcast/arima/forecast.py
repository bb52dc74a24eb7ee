"""Forecasting from a fitted ARIMA model.

Point forecasts propagate the filtered state through the difference-equation
structure and integrate the differencing back out; interval widths come from
the cumulative psi-weight variance of the full (integrated) model with
Gaussian quantiles.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import norm

from ..ets.models import Forecast
from .. import _arma_kernels as _kernels
from .order import ArimaFit
from .stationarity import regular_difference, seasonal_difference


def _polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(len(a) + len(b) - 1)
    for i, av in enumerate(a):
        out[i:i + len(b)] += av * b
    return out


def full_ar_polynomial(fit: ArimaFit) -> np.ndarray:
    """Coefficients c of phi(B)Phi(B^s)(1-B)^d(1-B^s)^D with c[0] = 1."""
    order = fit.order
    s = order.period_s
    phi_full = _kernels.expand_ar(fit.ar, fit.sar, s)
    c = np.concatenate(([1.0], -phi_full))
    for _ in range(order.d):
        c = _polymul(c, np.array([1.0, -1.0]))
    seas = np.zeros(s + 1)
    seas[0] = 1.0
    seas[s] = -1.0
    for _ in range(order.D):
        c = _polymul(c, seas)
    return c


def psi_weights(fit: ArimaFit, h: int) -> np.ndarray:
    """MA(infinity) weights of the integrated process, psi_0..psi_{h-1}."""
    c = full_ar_polynomial(fit)
    a = -c[1:]
    theta_full = _kernels.expand_ma(fit.ma, fit.sma, fit.order.period_s)
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        acc = theta_full[j - 1] if j - 1 < len(theta_full) else 0.0
        for i in range(1, min(j, len(a)) + 1):
            acc += a[i - 1] * psi[j - i]
        psi[j] = acc
    return psi


def _integrate_forecasts(fit: ArimaFit, w_hat: np.ndarray) -> np.ndarray:
    """Undo the differencing: w values extend the last stage, integration
    walks back up through the regular then seasonal stages."""
    order = fit.order
    s = order.period_s
    stages = [np.asarray(fit.train, dtype=np.float64)]
    for _ in range(order.D):
        stages.append(seasonal_difference(stages[-1], s))
    for _ in range(order.d):
        stages.append(regular_difference(stages[-1]))
    ext = [list(st) for st in stages]
    ext[-1].extend(w_hat)
    for lvl in range(len(stages) - 2, -1, -1):
        lag = 1 if lvl >= order.D else s
        for j in range(len(w_hat)):
            ext[lvl].append(ext[lvl + 1][len(stages[lvl + 1]) + j] + ext[lvl][-lag])
    return np.asarray(ext[0][len(stages[0]):])


def arima_forecast(fit: ArimaFit, h: int, levels=(0.95,)) -> Forecast:
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    levels = tuple(sorted(set(float(v) for v in levels)))
    for lv in levels:
        if not 0.0 < lv < 1.0:
            raise ValueError(f"confidence level must lie in (0, 1), got {lv}")
    order = fit.order
    s = order.period_s
    phi_full = _kernels.expand_ar(fit.ar, fit.sar, s)
    r = len(fit.final_state)
    phi = np.zeros(r)
    phi[: len(phi_full)] = phi_full

    mu = fit.constant if fit.constant is not None else 0.0
    a = fit.final_state.copy()
    w_hat = np.empty(h)
    for j in range(h):
        w_hat[j] = a[0] + mu
        nxt = np.empty(r)
        for i in range(r):
            nxt[i] = phi[i] * a[0] + (a[i + 1] if i + 1 < r else 0.0)
        a = nxt
    point = _integrate_forecasts(fit, w_hat)

    psi = psi_weights(fit, h)
    var = fit.sigma2 * np.cumsum(psi * psi)
    sd = np.sqrt(np.maximum(var, 0.0))
    intervals: dict[float, tuple[np.ndarray, np.ndarray]] = {}
    for lv in levels:
        z = norm.ppf(0.5 + lv / 2.0)
        lower = point - z * sd
        upper = point + z * sd
        lower.setflags(write=False)
        upper.setflags(write=False)
        intervals[lv] = (lower, upper)
    point.setflags(write=False)
    return Forecast(point=point, intervals=intervals, source=fit.descriptor, method="analytic")
