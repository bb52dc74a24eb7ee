"""Derivative-free simplex minimizer compiled with numba.

Objectives take ``(x, fargs, iargs)`` where ``fargs`` is a float64 payload
(typically the training data) and ``iargs`` packs integer flags. Bounds are
enforced inside the objectives via graded penalties, so the search itself is
unconstrained. The routine mirrors the classic Nelder-Mead moves with the
standard coefficients and scipy-style initial simplex construction.

Objective selection happens through an integer ``kind`` switch (0 = ETS,
1 = ARMA) rather than a function argument so that the whole compiled chain
stays disk-cacheable.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._arma_kernels import arma_objective
from ._ets_kernels import ets_objective

KIND_ETS = 0
KIND_ARMA = 1


@njit(cache=True)
def _eval(kind, x, fargs, iargs):
    if kind == KIND_ETS:
        return ets_objective(x, fargs, iargs)
    return arma_objective(x, fargs, iargs)


@njit(cache=True)
def minimize_simplex(kind, x0, fargs, iargs, fatol, xatol, maxfev):
    """Minimize the selected objective from x0; returns (x_best, f_best, nfev)."""
    n = x0.shape[0]
    rho = 1.0
    chi = 2.0
    psi = 0.5
    sigma = 0.5

    sim = np.empty((n + 1, n))
    fsim = np.empty(n + 1)
    sim[0, :] = x0
    fsim[0] = _eval(kind, x0, fargs, iargs)
    nfev = 1
    nonzdelt = 0.05
    zdelt = 0.00025
    for k in range(n):
        y = x0.copy()
        if y[k] != 0.0:
            y[k] = (1.0 + nonzdelt) * y[k]
        else:
            y[k] = zdelt
        sim[k + 1, :] = y
        fsim[k + 1] = _eval(kind, y, fargs, iargs)
        nfev += 1

    order = np.argsort(fsim)
    sim = sim[order]
    fsim = fsim[order]

    while nfev < maxfev:
        # convergence on both simplex size and objective spread
        max_x = 0.0
        max_f = 0.0
        for i in range(1, n + 1):
            df = abs(fsim[i] - fsim[0])
            if df > max_f:
                max_f = df
            for j in range(n):
                dx = abs(sim[i, j] - sim[0, j])
                if dx > max_x:
                    max_x = dx
        if max_x <= xatol and max_f <= fatol:
            break

        xbar = np.zeros(n)
        for i in range(n):
            for j in range(n):
                xbar[j] += sim[i, j]
        xbar /= n

        xr = (1.0 + rho) * xbar - rho * sim[n]
        fxr = _eval(kind, xr, fargs, iargs)
        nfev += 1
        doshrink = False

        if fxr < fsim[0]:
            xe = (1.0 + rho * chi) * xbar - rho * chi * sim[n]
            fxe = _eval(kind, xe, fargs, iargs)
            nfev += 1
            if fxe < fxr:
                sim[n] = xe
                fsim[n] = fxe
            else:
                sim[n] = xr
                fsim[n] = fxr
        elif fxr < fsim[n - 1]:
            sim[n] = xr
            fsim[n] = fxr
        elif fxr < fsim[n]:
            # outside contraction
            xc = (1.0 + psi * rho) * xbar - psi * rho * sim[n]
            fxc = _eval(kind, xc, fargs, iargs)
            nfev += 1
            if fxc <= fxr:
                sim[n] = xc
                fsim[n] = fxc
            else:
                doshrink = True
        else:
            # inside contraction
            xcc = (1.0 - psi) * xbar + psi * sim[n]
            fxcc = _eval(kind, xcc, fargs, iargs)
            nfev += 1
            if fxcc < fsim[n]:
                sim[n] = xcc
                fsim[n] = fxcc
            else:
                doshrink = True

        if doshrink:
            for i in range(1, n + 1):
                for j in range(n):
                    sim[i, j] = sim[0, j] + sigma * (sim[i, j] - sim[0, j])
                fsim[i] = _eval(kind, sim[i], fargs, iargs)
                nfev += 1

        order = np.argsort(fsim)
        sim = sim[order]
        fsim = fsim[order]

    return sim[0].copy(), fsim[0], nfev
