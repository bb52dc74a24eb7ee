"""Exact maximum-likelihood estimation of one seasonal ARIMA model.

The series is differenced first; a conditional-sum-of-squares simplex pass
supplies starting values and the exact Gaussian likelihood (Kalman filter)
is then maximized. The differenced series is standardized internally so the
simplex search is well conditioned regardless of data scale; the reported
likelihood and variance are mapped back to the original units.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .._optim import KIND_ARMA, minimize_simplex
from ..criteria import all_criteria
from ..errors import (
    InsufficientData,
    NonInvertibleFit,
    NonStationaryFit,
    OptimizationFailed,
)
from .. import _arma_kernels as _kernels
from .order import ArimaFit, ArimaOrder
from .stationarity import regular_difference, seasonal_difference

_ROOT_TOL = 1e-9


def difference_series(y: np.ndarray, order: ArimaOrder) -> np.ndarray:
    w = seasonal_difference(y, order.period_s, order.D) if order.D else np.asarray(y, float)
    if order.d:
        w = regular_difference(w, order.d)
    return w


def parameter_total(order: ArimaOrder) -> int:
    return order.order() + (1 if order.with_constant else 0) + 1


def _check_margins(ar, ma, sar, sma) -> None:
    if _kernels.max_inverse_root(ar, 0) > _kernels.INV_ROOT_LIMIT + _ROOT_TOL:
        raise NonStationaryFit("AR roots inside the stationarity margin")
    if _kernels.max_inverse_root(sar, 0) > _kernels.INV_ROOT_LIMIT + _ROOT_TOL:
        raise NonStationaryFit("seasonal AR roots inside the stationarity margin")
    if _kernels.max_inverse_root(ma, 1) > _kernels.INV_ROOT_LIMIT + _ROOT_TOL:
        raise NonInvertibleFit("MA roots inside the invertibility margin")
    if _kernels.max_inverse_root(sma, 1) > _kernels.INV_ROOT_LIMIT + _ROOT_TOL:
        raise NonInvertibleFit("seasonal MA roots inside the invertibility margin")


def arima_fit(train, order: ArimaOrder, *, aicc_form: str = "standard") -> ArimaFit:
    t_start = time.perf_counter()
    y = np.ascontiguousarray(train, dtype=np.float64)
    w = difference_series(y, order)
    n_eff = len(w)
    k = parameter_total(order)
    if n_eff < k + 2:
        raise InsufficientData(
            f"{order.descriptor}: need n_effective >= {k + 2}, got {n_eff}"
        )

    if order.with_constant:
        scale = float(np.std(w))
    else:
        scale = float(np.sqrt(np.mean(w * w)))
    if not np.isfinite(scale) or scale <= 0.0:
        scale = 1.0
    ws = np.ascontiguousarray(w / scale)

    n_coef = order.order()
    n_par = n_coef + (1 if order.with_constant else 0)
    x0 = np.zeros(n_par)
    if order.with_constant:
        x0[-1] = float(np.mean(ws))

    iargs = np.array(
        [order.p, order.q, order.P, order.Q, order.period_s,
         int(order.with_constant), 0],
        dtype=np.int64,
    )
    if n_par > 0:
        css_budget = 100 * (n_par + 1)
        x_css, f_css, _ = minimize_simplex(KIND_ARMA, x0, ws, iargs, 1e-8, 1e-8, css_budget)
        if not np.isfinite(f_css) or f_css >= 1e10:
            x_css = x0
    else:
        x_css = x0

    iargs_exact = iargs.copy()
    iargs_exact[6] = 1
    budget = 200 * (n_par + 2)
    x_opt, f_opt, _ = minimize_simplex(KIND_ARMA, x_css, ws, iargs_exact, 1e-8, 1e-8, budget)
    if not np.isfinite(f_opt) or f_opt >= 1e10:
        raise OptimizationFailed(f"{order.descriptor}: likelihood never became finite")

    p, q, P, Q = order.p, order.q, order.P, order.Q
    ar = x_opt[0:p].copy()
    ma = x_opt[p:p + q].copy()
    sar = x_opt[p + q:p + q + P].copy()
    sma = x_opt[p + q + P:p + q + P + Q].copy()
    mu_s = float(x_opt[n_coef]) if order.with_constant else 0.0
    _check_margins(ar, ma, sar, sma)

    phi_full = _kernels.expand_ar(ar, sar, order.period_s)
    theta_full = _kernels.expand_ma(ma, sma, order.period_s)
    ok, ssq, sumlogF, a_final = _kernels.kalman_filter(
        np.ascontiguousarray(ws - mu_s), phi_full, theta_full
    )
    if not ok:
        raise OptimizationFailed(f"{order.descriptor}: filter failed at the optimum")
    sigma2_s = max(ssq / n_eff, 1e-300)
    logL = (-0.5 * (n_eff * math.log(2.0 * math.pi * sigma2_s) + n_eff + sumlogF)
            - n_eff * math.log(scale))
    criteria = all_criteria(logL, k, n_eff, aicc_form=aicc_form)

    for arr in (ar, ma, sar, sma):
        arr.setflags(write=False)
    return ArimaFit(
        order=order,
        ar=ar,
        ma=ma,
        sar=sar,
        sma=sma,
        constant=mu_s * scale if order.with_constant else None,
        sigma2=float(sigma2_s * scale * scale),
        logL=float(logL),
        k=int(k),
        n_effective=int(n_eff),
        criteria=criteria,
        fit_seconds=float(time.perf_counter() - t_start),
        train=np.asarray(y),
        final_state=np.asarray(a_final * scale),
    )
