"""Numba kernels for the innovations state-space recursions.

Component codes: error 0=A 1=M; trend 0=N 1=A 2=M; season 0=N 1=A 2=M.
Damped trends pass phi < 1; non-damped pass phi = 1. The seasonal state
array keeps the most recent index at position 0 and the oldest (the one
consumed next) at position m-1.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_TOL = 1e-10
_HUGE = 1e100


@njit(cache=True)
def ets_filter(y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s0):
    """Run the error-correction recursion over a training series.

    Returns (ok, sse, sumlog, fitted, resid, l, b, s) where sumlog is the
    accumulated log|mu_t| Jacobian term (zero for additive error) and
    (l, b, s) are the states after the last observation.
    """
    n = y.shape[0]
    fitted = np.empty(n)
    resid = np.empty(n)
    s = s0.copy()
    l = l0
    b = b0
    sse = 0.0
    sumlog = 0.0
    for i in range(n):
        # trend-combined level
        if trend == 0:
            q = l
            phib = 0.0
        elif trend == 1:
            phib = phi * b
            q = l + phib
        else:
            if b <= 0.0 or l <= 0.0:
                return 0, np.inf, 0.0, fitted, resid, l, b, s
            phib = b ** phi
            q = l * phib
        # one-step forecast
        if season == 0:
            f = q
        elif season == 1:
            f = q + s[m - 1]
        else:
            f = q * s[m - 1]
        if not np.isfinite(f):
            return 0, np.inf, 0.0, fitted, resid, l, b, s
        # innovation
        if error == 0:
            e = y[i] - f
        else:
            if abs(f) < _TOL:
                return 0, np.inf, 0.0, fitted, resid, l, b, s
            e = (y[i] - f) / f
            sumlog += np.log(abs(f))
        # de-seasonalized observation
        if season == 0:
            p = y[i]
        elif season == 1:
            p = y[i] - s[m - 1]
        else:
            if abs(s[m - 1]) < _TOL:
                return 0, np.inf, 0.0, fitted, resid, l, b, s
            p = y[i] / s[m - 1]
        l_new = q + alpha * (p - q)
        if trend == 1:
            r = l_new - l
            b = phib + (beta / alpha) * (r - phib)
        elif trend == 2:
            if abs(l) < _TOL:
                return 0, np.inf, 0.0, fitted, resid, l, b, s
            r = l_new / l
            b = phib + (beta / alpha) * (r - phib)
        if season == 1:
            t = y[i] - q
            snew = s[m - 1] + gamma * (t - s[m - 1])
            for j in range(m - 1, 0, -1):
                s[j] = s[j - 1]
            s[0] = snew
        elif season == 2:
            if abs(q) < _TOL:
                return 0, np.inf, 0.0, fitted, resid, l, b, s
            t = y[i] / q
            snew = s[m - 1] + gamma * (t - s[m - 1])
            for j in range(m - 1, 0, -1):
                s[j] = s[j - 1]
            s[0] = snew
        l = l_new
        if abs(l) > _HUGE or (trend > 0 and abs(b) > _HUGE):
            return 0, np.inf, 0.0, fitted, resid, l, b, s
        fitted[i] = f
        resid[i] = e
        sse += e * e
    if not np.isfinite(sse):
        return 0, np.inf, 0.0, fitted, resid, l, b, s
    return 1, sse, sumlog, fitted, resid, l, b, s


@njit(cache=True)
def ets_mean_path(l, b, s, m, trend, season, phi, h):
    """Conditional-mean recursion from the final states."""
    mu = np.empty(h)
    phistar = phi
    for i in range(h):
        if trend == 0:
            f = l
        elif trend == 1:
            f = l + phistar * b
        else:
            if b < 0.0:
                f = np.nan
            else:
                f = l * b ** phistar
        j = (m - 1 - i) % m
        if season == 1:
            f = f + s[j]
        elif season == 2:
            f = f * s[j]
        mu[i] = f
        if abs(phi - 1.0) < 1e-12:
            phistar += 1.0
        else:
            phistar += phi ** (i + 2)
    return mu


@njit(cache=True)
def ets_simulate_paths(l0, b0, s0, m, error, trend, season,
                       alpha, beta, gamma, phi, eps):
    """Iterate the recursion forward under sampled innovations.

    eps has shape (paths, h) and already carries the residual scale. A path
    that overflows is pinned at +/-1e300 for its remaining steps so that
    quantiles stay well-defined; values that large dominate every interval
    anyway.
    """
    paths, h = eps.shape
    out = np.empty((paths, h))
    s = np.empty(max(m, 1))
    for pth in range(paths):
        l = l0
        b = b0
        for j in range(s0.shape[0]):
            s[j] = s0[j]
        dead = False
        hold = 0.0
        for i in range(h):
            if dead:
                out[pth, i] = hold
                continue
            if trend == 0:
                q = l
                phib = 0.0
            elif trend == 1:
                phib = phi * b
                q = l + phib
            else:
                if b <= 0.0:
                    dead = True
                    hold = 1e300 if l >= 0 else -1e300
                    out[pth, i] = hold
                    continue
                phib = b ** phi
                q = l * phib
            if season == 0:
                f = q
            elif season == 1:
                f = q + s[m - 1]
            else:
                f = q * s[m - 1]
            if error == 0:
                yv = f + eps[pth, i]
            else:
                yv = f * (1.0 + eps[pth, i])
            if not np.isfinite(yv):
                dead = True
                hold = 1e300 if f >= 0 else -1e300
                out[pth, i] = hold
                continue
            out[pth, i] = yv
            # state update mirrors ets_filter
            if season == 0:
                p = yv
            elif season == 1:
                p = yv - s[m - 1]
            else:
                p = yv / s[m - 1] if abs(s[m - 1]) > _TOL else yv
            l_new = q + alpha * (p - q)
            if trend == 1:
                b = phib + (beta / alpha) * (l_new - l - phib)
            elif trend == 2:
                if abs(l) > _TOL:
                    b = phib + (beta / alpha) * (l_new / l - phib)
            if season == 1:
                t = yv - q
                snew = s[m - 1] + gamma * (t - s[m - 1])
                for j in range(m - 1, 0, -1):
                    s[j] = s[j - 1]
                s[0] = snew
            elif season == 2:
                t = yv / q if abs(q) > _TOL else 1.0
                snew = s[m - 1] + gamma * (t - s[m - 1])
                for j in range(m - 1, 0, -1):
                    s[j] = s[j - 1]
                s[0] = snew
            l = l_new
            if abs(l) > 1e250 or (trend > 0 and abs(b) > 1e250):
                dead = True
                hold = 1e300 if l >= 0 else -1e300
    return out


@njit(cache=True)
def ets_objective(x, fargs, iargs):
    """Packed objective for the simplex search: -2 log-likelihood up to a
    constant, with graded penalties outside the parameter bounds.

    iargs: m, error, trend, season, has_trend, has_season, damped,
    mult_trend, pos_level.
    """
    y = fargs
    m = iargs[0]
    error = iargs[1]
    trend = iargs[2]
    season = iargs[3]
    has_trend = iargs[4]
    has_season = iargs[5]
    damped = iargs[6]
    mult_trend = iargs[7]
    pos_level = iargs[8]

    i = 0
    alpha = x[i]; i += 1
    beta = 0.0
    gamma = 0.0
    phi = 1.0
    if has_trend == 1:
        beta = x[i]; i += 1
    if has_season == 1:
        gamma = x[i]; i += 1
    if damped == 1:
        phi = x[i]; i += 1
    l0 = x[i]; i += 1
    b0 = 1.0 if mult_trend == 1 else 0.0
    if has_trend == 1:
        b0 = x[i]; i += 1
    if has_season == 1:
        s_state = np.empty(m)
        ssum = 0.0
        for j in range(m - 1):
            s_state[j] = x[i + j]
            ssum += x[i + j]
        if season == 2:
            s_state[m - 1] = m - ssum
        else:
            s_state[m - 1] = -ssum
    else:
        s_state = np.zeros(1)

    v = 0.0
    v += max(0.0, 1e-4 - alpha) + max(0.0, alpha - (1.0 - 1e-4))
    if has_trend == 1:
        v += max(0.0, 1e-4 - beta) + max(0.0, beta - alpha)
    if has_season == 1:
        v += max(0.0, 1e-4 - gamma) + max(0.0, gamma - (1.0 - alpha))
    if damped == 1:
        v += max(0.0, 0.8 - phi) + max(0.0, phi - 0.98)
    if mult_trend == 1:
        v += max(0.0, 1e-8 - b0)
    if season == 2:
        for j in range(m):
            v += max(0.0, 1e-8 - s_state[j])
    if pos_level == 1:
        v += max(0.0, 1e-8 - l0)
    if v > 0.0:
        return 1e10 * (1.0 + v)

    ok, sse, sumlog, fitted, resid, l, b, s = ets_filter(
        y, m, error, trend, season, alpha, beta, gamma, phi, l0, b0, s_state
    )
    if ok == 0:
        return 1e10
    n = y.shape[0]
    if sse < 1e-300:
        sse = 1e-300
    return n * np.log(sse) + 2.0 * sumlog
