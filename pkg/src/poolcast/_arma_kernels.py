"""Numba kernels for seasonal ARIMA estimation.

The exact Gaussian likelihood of the differenced series is evaluated with a
Kalman filter in the companion-form state space (state dimension
max(p+sP, q+sQ+1)), with the stationary initial covariance obtained by a
doubling iteration on the Lyapunov equation and a steady-state freeze once
the predicted covariance converges. A conditional-sum-of-squares pass
provides starting values.

Both stationarity and invertibility are enforced through graded penalties
on the inverse-root moduli of each of the four lag polynomials, with the
margin 1/1.001.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INV_ROOT_LIMIT = 1.0 / 1.001


@njit(cache=True)
def expand_ar(ar, sar, s):
    """Coefficients a_k of phi(B)Phi(B^s) written as 1 - sum a_k B^k."""
    p = ar.shape[0]
    P = sar.shape[0]
    n = p + s * P
    out = np.zeros(n)
    for i in range(p):
        out[i] = ar[i]
    for j in range(P):
        out[(j + 1) * s - 1] += sar[j]
        for i in range(p):
            out[i + (j + 1) * s] -= ar[i] * sar[j]
    return out


@njit(cache=True)
def expand_ma(ma, sma, s):
    """Coefficients t_k of theta(B)Theta(B^s) written as 1 + sum t_k B^k."""
    q = ma.shape[0]
    Q = sma.shape[0]
    n = q + s * Q
    out = np.zeros(n)
    for i in range(q):
        out[i] = ma[i]
    for j in range(Q):
        out[(j + 1) * s - 1] += sma[j]
        for i in range(q):
            out[i + (j + 1) * s] += ma[i] * sma[j]
    return out


@njit(cache=True)
def max_inverse_root(coeffs, negate):
    """Largest inverse-root modulus of 1 -/+ sum c_i z^i (negate=0 for AR
    sign convention, 1 for MA)."""
    n = coeffs.shape[0]
    while n > 0 and coeffs[n - 1] == 0.0:
        n -= 1
    if n == 0:
        return 0.0
    # complex dtype: companion eigenvalues are complex in general and
    # numba's eigvals cannot domain-change from a real input
    C = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        C[0, j] = coeffs[j] if negate == 0 else -coeffs[j]
    for i in range(1, n):
        C[i, i - 1] = 1.0
    lam = np.linalg.eigvals(C)
    best = 0.0
    for i in range(n):
        mod = abs(lam[i])
        if mod > best:
            best = mod
    return best


@njit(cache=True)
def margin_violation(ar, ma, sar, sma):
    v = 0.0
    v += max(0.0, max_inverse_root(ar, 0) - INV_ROOT_LIMIT)
    v += max(0.0, max_inverse_root(sar, 0) - INV_ROOT_LIMIT)
    v += max(0.0, max_inverse_root(ma, 1) - INV_ROOT_LIMIT)
    v += max(0.0, max_inverse_root(sma, 1) - INV_ROOT_LIMIT)
    return v


@njit(cache=True)
def kalman_filter(wt, phi_full, theta_full):
    """Concentrated exact-likelihood pass.

    Returns (ok, ssq, sumlogF, a_final) with ssq = sum v_t^2 / F_t and
    sumlogF = sum log F_t, both at unit innovation variance.
    """
    n = wt.shape[0]
    pp = phi_full.shape[0]
    qq = theta_full.shape[0]
    r = max(pp, qq + 1)
    phi = np.zeros(r)
    for i in range(pp):
        phi[i] = phi_full[i]
    Rv = np.zeros(r)
    Rv[0] = 1.0
    for i in range(qq):
        Rv[i + 1] = theta_full[i]
    a = np.zeros(r)

    # stationary initial covariance by Lyapunov doubling
    T = np.zeros((r, r))
    for i in range(r):
        T[i, 0] = phi[i]
        if i + 1 < r:
            T[i, i + 1] = 1.0
    P = np.outer(Rv, Rv)
    A = T.copy()
    for _ in range(40):
        amax = 0.0
        for i in range(r):
            for j in range(r):
                av = abs(A[i, j])
                if av > amax:
                    amax = av
        if amax < 1e-13:
            break
        P = P + np.dot(np.dot(A, P), A.T)
        A = np.dot(A, A)
        if amax > 1e100:
            return 0, np.inf, 0.0, a
    ok_fin = True
    for i in range(r):
        for j in range(r):
            if not np.isfinite(P[i, j]):
                ok_fin = False
    if not ok_fin:
        return 0, np.inf, 0.0, a

    ssq = 0.0
    sumlogF = 0.0
    Pn = np.empty((r, r))
    W = np.empty((r, r))
    K = np.empty(r)
    an = np.empty(r)
    steady = False
    F = P[0, 0]
    for t in range(n):
        if not steady:
            F = P[0, 0]
            if not np.isfinite(F) or F < 1e-12:
                return 0, np.inf, 0.0, a
            for i in range(r):
                K[i] = P[i, 0] / F
        v = wt[t] - a[0]
        ssq += v * v / F
        sumlogF += np.log(F)
        # state: a <- T (a + K v)
        for i in range(r):
            an[i] = a[i] + K[i] * v
        for i in range(r):
            nxt = an[i + 1] if i + 1 < r else 0.0
            a[i] = phi[i] * an[0] + nxt
        if not steady:
            # W = P - K (P row 0); Pn = T W T' + Rv Rv'
            for i in range(r):
                for j in range(r):
                    W[i, j] = P[i, j] - K[i] * P[0, j]
            # T W: row i = phi[i] * W[0, :] + W[i+1, :]
            for i in range(r):
                for j in range(r):
                    val = phi[i] * W[0, j]
                    if i + 1 < r:
                        val += W[i + 1, j]
                    Pn[i, j] = val
            # (T W) T': col j = phi[j] * col 0 + col j+1
            for i in range(r):
                base0 = Pn[i, 0]
                for j in range(r):
                    val = phi[j] * base0
                    if j + 1 < r:
                        val += Pn[i, j + 1]
                    W[i, j] = val + Rv[i] * Rv[j]
            delta = 0.0
            for i in range(r):
                for j in range(r):
                    dv = abs(W[i, j] - P[i, j])
                    if dv > delta:
                        delta = dv
                    P[i, j] = W[i, j]
            if delta < 1e-12 * (1.0 + abs(F)):
                steady = True
    return 1, ssq, sumlogF, a


@njit(cache=True)
def css_pass(wt, phi_full, theta_full):
    """Conditional sum of squares with zero pre-sample values."""
    n = wt.shape[0]
    pp = phi_full.shape[0]
    qq = theta_full.shape[0]
    if n - pp < 1:
        return 0, np.inf, 0
    e = np.zeros(n)
    sse = 0.0
    for t in range(pp, n):
        acc = wt[t]
        for i in range(pp):
            acc -= phi_full[i] * wt[t - 1 - i]
        for j in range(qq):
            idx = t - 1 - j
            if idx >= pp:
                acc -= theta_full[j] * e[idx]
        e[t] = acc
        sse += acc * acc
    if not np.isfinite(sse):
        return 0, np.inf, 0
    return 1, sse, n - pp


@njit(cache=True)
def arma_objective(x, fargs, iargs):
    """Packed objective: exact (-2 log L up to constants) or CSS.

    iargs: p, q, P, Q, s, with_constant, exact_flag.
    """
    w = fargs
    p = iargs[0]
    q = iargs[1]
    P = iargs[2]
    Q = iargs[3]
    s = iargs[4]
    with_const = iargs[5]
    exact = iargs[6]

    for i in range(x.shape[0]):
        if not np.isfinite(x[i]):
            return 1e12

    ar = x[0:p].copy()
    ma = x[p:p + q].copy()
    sar = x[p + q:p + q + P].copy()
    sma = x[p + q + P:p + q + P + Q].copy()
    mu = x[p + q + P + Q] if with_const == 1 else 0.0

    v = margin_violation(ar, ma, sar, sma)
    if v > 0.0:
        return 1e10 * (1.0 + v)

    phi_full = expand_ar(ar, sar, s)
    theta_full = expand_ma(ma, sma, s)
    n = w.shape[0]
    wt = np.empty(n)
    for i in range(n):
        wt[i] = w[i] - mu

    if exact == 1:
        ok, ssq, sumlogF, _a = kalman_filter(wt, phi_full, theta_full)
        if ok == 0:
            return 1e10
        sig = ssq / n
        if sig < 1e-300:
            sig = 1e-300
        return n * np.log(sig) + sumlogF
    ok, sse, ncount = css_pass(wt, phi_full, theta_full)
    if ok == 0 or ncount < 1:
        return 1e10
    sig = sse / ncount
    if sig < 1e-300:
        sig = 1e-300
    return ncount * np.log(sig)
