"""Candidate-order search: exhaustive within a maximum order, or stepwise.

Both searches fix the differencing orders once (seasonal strength, then
repeated KPSS) and compare candidates on the requested information
criterion over the same effective sample.
"""

from __future__ import annotations

import numpy as np

from ..errors import AllModelsFailed, FitError, PoolcastError
from ..fitlog import ModelFitLogEntry
from .fit import arima_fit
from .order import ArimaFit, ArimaOrder
from .stationarity import choose_differencing

STEPWISE_MAX_ORDER = 8


def order_tuples(K: int, seasonal: bool) -> list[tuple[int, int, int, int]]:
    """All (p, q, P, Q) with p+q+P+Q <= K, in lexicographic order; P = Q = 0
    for non-seasonal data."""
    out = []
    if seasonal:
        for p in range(K + 1):
            for q in range(K + 1 - p):
                for P in range(K + 1 - p - q):
                    for Q in range(K + 1 - p - q - P):
                        out.append((p, q, P, Q))
    else:
        for p in range(K + 1):
            for q in range(K + 1 - p):
                out.append((p, q, 0, 0))
    return out


def _constant_variants(d: int, D: int) -> tuple[bool, ...]:
    return (False, True) if d + D <= 1 else (False,)


def _fit_candidate(train, order: ArimaOrder, criterion: str, aicc_form: str,
                   log: list[ModelFitLogEntry]):
    try:
        fit = arima_fit(train, order, aicc_form=aicc_form)
    except (FitError, PoolcastError) as exc:
        log.append(ModelFitLogEntry(order.descriptor, "error", None,
                                    f"{type(exc).__name__}: {exc}", 0.0))
        return None, np.inf
    value = fit.criteria[criterion]
    log.append(ModelFitLogEntry(order.descriptor, "ok", value, None, fit.fit_seconds))
    if not np.isfinite(value):
        return None, np.inf
    return fit, value


def arima_search_exhaustive(train, period_s: int, K: int, criterion: str = "aicc", *,
                            aicc_form: str = "standard",
                            d: int | None = None, D: int | None = None,
                            ) -> tuple[ArimaFit, list[ModelFitLogEntry]]:
    """Fit every order tuple with p+q+P+Q <= K (constant variants included
    when d+D <= 1) and return the criterion-minimal surviving fit."""
    if not 1 <= K <= 8:
        raise ValueError(f"K must be in 1..8, got {K}")
    y = np.asarray(train, dtype=np.float64)
    seasonal = period_s > 1
    if d is None or D is None:
        d_sel, D_sel = choose_differencing(y, period_s)
        d = d_sel if d is None else d
        D = D_sel if D is None else D
    if not seasonal:
        D = 0

    log: list[ModelFitLogEntry] = []
    best: ArimaFit | None = None
    best_value = np.inf
    for (p, q, P, Q) in order_tuples(K, seasonal):
        for with_c in _constant_variants(d, D):
            order = ArimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q,
                               period_s=period_s, with_constant=with_c)
            fit, value = _fit_candidate(y, order, criterion, aicc_form, log)
            if fit is not None and value < best_value:
                best = fit
                best_value = value
    if best is None:
        raise AllModelsFailed(f"no ARIMA candidate with K={K} produced a usable fit")
    return best, log


_STEPWISE_STARTS = ((2, 2, 1, 1), (0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1))


def _stepwise_neighbors(p, q, P, Q, with_c, seasonal, const_allowed):
    moves = []
    for dp in (-1, 1):
        moves.append((p + dp, q, P, Q, with_c))
        moves.append((p, q + dp, P, Q, with_c))
        if seasonal:
            moves.append((p, q, P + dp, Q, with_c))
            moves.append((p, q, P, Q + dp, with_c))
    if const_allowed:
        moves.append((p, q, P, Q, not with_c))
    out = []
    for (np_, nq, nP, nQ, nc) in moves:
        if min(np_, nq, nP, nQ) < 0:
            continue
        if np_ + nq + nP + nQ > STEPWISE_MAX_ORDER:
            continue
        out.append((np_, nq, nP, nQ, nc))
    return out


def arima_search_stepwise(train, period_s: int, criterion: str = "aicc", *,
                          aicc_form: str = "standard",
                          ) -> tuple[ArimaFit, list[ModelFitLogEntry]]:
    """Hill-climb over (p, q, P, Q, constant) from the standard start set,
    moving while a neighbor improves the criterion. Each candidate is fitted
    at most once; the total order is capped at 8 so the stepwise search
    explores a subset of the largest exhaustive pool."""
    y = np.asarray(train, dtype=np.float64)
    seasonal = period_s > 1
    d, D = choose_differencing(y, period_s)
    if not seasonal:
        D = 0
    const_allowed = d + D <= 1

    log: list[ModelFitLogEntry] = []
    seen: dict[tuple[int, int, int, int, bool], float] = {}

    def try_candidate(p, q, P, Q, with_c):
        if not seasonal:
            P = Q = 0
        key = (p, q, P, Q, with_c)
        if key in seen:
            return None, seen[key]
        order = ArimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q,
                           period_s=period_s, with_constant=with_c)
        fit, value = _fit_candidate(y, order, criterion, aicc_form, log)
        seen[key] = value
        return fit, value

    best: ArimaFit | None = None
    best_value = np.inf
    for (p, q, P, Q) in _STEPWISE_STARTS:
        fit, value = try_candidate(p, q, P, Q, const_allowed)
        if fit is not None and value < best_value:
            best, best_value = fit, value
    if best is None:
        raise AllModelsFailed("no stepwise starting candidate produced a usable fit")

    improved = True
    while improved:
        improved = False
        o = best.order
        for (p, q, P, Q, with_c) in _stepwise_neighbors(
            o.p, o.q, o.P, o.Q, o.with_constant, seasonal, const_allowed
        ):
            fit, value = try_candidate(p, q, P, Q, with_c)
            if fit is not None and value < best_value:
                best, best_value = fit, value
                improved = True
        # restart the neighborhood scan from the new incumbent
    return best, log
