"""Point forecasts and prediction intervals for fitted ETS models.

Interval construction follows the three standard analytic classes:

* additive error with additive/no trend and additive/no seasonality:
  linear-model variance from the cumulated response coefficients;
* multiplicative error with the same linear structure: variance recursion
  on the squared means;
* multiplicative error with multiplicative seasonality: the class-2
  recursion on the deseasonalized part, rescaled by the seasonal index
  (exact within the first seasonal cycle).

The four multiplicative-trend forms have no analytic expressions, so their
intervals come from seeded sample paths.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import norm

from .. import _ets_kernels as _kernels
from .fit import _component_codes
from .models import SIMULATION_ONLY_MODELS, EtsFit, Forecast

DEFAULT_PATHS = 5000


def _finite_states(fit: EtsFit):
    l = fit.final_level
    b = fit.final_trend if fit.final_trend is not None else 0.0
    if fit.final_seasonal is not None:
        s = np.ascontiguousarray(fit.final_seasonal, dtype=np.float64)
    else:
        s = np.zeros(1)
    return l, b, s


def _mean_path(fit: EtsFit, h: int) -> np.ndarray:
    l, b, s = _finite_states(fit)
    _, trend, season = _component_codes(fit.spec)
    phi = fit.phi if fit.phi is not None else 1.0
    return _kernels.ets_mean_path(l, b, s, fit.period_s, trend, season, phi, h)


def _response_coefficients(fit: EtsFit, h: int, with_seasonal: bool) -> np.ndarray:
    """c_j for j = 1..h-1: the impact of innovation t+j on the t+h mean."""
    alpha = fit.alpha
    beta = fit.beta or 0.0
    gamma = fit.gamma or 0.0
    phi = fit.phi if fit.phi is not None else 1.0
    m = fit.period_s
    c = np.empty(max(h - 1, 0))
    phisum = 0.0
    for j in range(1, h):
        if fit.spec.damped:
            phisum = phisum * phi + phi
        else:
            phisum = float(j)
        cj = alpha
        if fit.spec.has_trend:
            cj += beta * phisum
        if with_seasonal and fit.spec.seasonal == "A" and j % m == 0:
            cj += gamma
        c[j - 1] = cj
    return c


def _variance_class1(fit: EtsFit, h: int) -> np.ndarray:
    c = _response_coefficients(fit, h, with_seasonal=True)
    var = np.empty(h)
    var[0] = fit.sigma2
    acc = 1.0
    for j in range(1, h):
        acc += c[j - 1] ** 2
        var[j] = fit.sigma2 * acc
    return var


def _variance_class2(fit: EtsFit, mu: np.ndarray, h: int, with_seasonal: bool) -> np.ndarray:
    s2 = fit.sigma2
    c = _response_coefficients(fit, h, with_seasonal=with_seasonal)
    theta = np.empty(h)
    var = np.empty(h)
    for i in range(h):
        t = mu[i] ** 2
        for j in range(1, i + 1):
            t += s2 * c[j - 1] ** 2 * theta[i - j]
        theta[i] = t
        var[i] = (1.0 + s2) * theta[i] - mu[i] ** 2
    return var


def _seasonal_index_path(fit: EtsFit, h: int) -> np.ndarray:
    s = fit.final_seasonal
    m = fit.period_s
    return np.array([s[(m - 1 - i) % m] for i in range(h)])


def ets_forecast(fit: EtsFit, h: int, levels=(0.95,), paths: int = DEFAULT_PATHS,
                 seed: int = 0) -> Forecast:
    """Forecast h steps ahead with prediction intervals at the given levels."""
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    levels = tuple(sorted(set(float(v) for v in levels)))
    for lv in levels:
        if not 0.0 < lv < 1.0:
            raise ValueError(f"confidence level must lie in (0, 1), got {lv}")
    point = np.asarray(_mean_path(fit, h), dtype=np.float64)

    intervals: dict[float, tuple[np.ndarray, np.ndarray]] = {}
    if fit.spec in SIMULATION_ONLY_MODELS:
        method = "simulated"
        l, b, s = _finite_states(fit)
        error, trend, season = _component_codes(fit.spec)
        rng = np.random.default_rng(seed)
        eps = rng.standard_normal((paths, h)) * np.sqrt(fit.sigma2)
        sims = _kernels.ets_simulate_paths(
            l, b, s, fit.period_s, error, trend, season,
            fit.alpha, fit.beta or 0.0, fit.gamma or 0.0,
            fit.phi if fit.phi is not None else 1.0, eps,
        )
        for lv in levels:
            a = 1.0 - lv
            lower = np.quantile(sims, a / 2.0, axis=0, method="linear")
            upper = np.quantile(sims, 1.0 - a / 2.0, axis=0, method="linear")
            intervals[lv] = (lower, upper)
    else:
        method = "analytic"
        if fit.spec.error == "A":
            var = _variance_class1(fit, h)
        elif fit.spec.seasonal != "M":
            var = _variance_class2(fit, point, h, with_seasonal=True)
        else:
            sidx = _seasonal_index_path(fit, h)
            mu_bare = point / np.where(np.abs(sidx) > 1e-300, sidx, 1.0)
            var_bare = _variance_class2(fit, mu_bare, h, with_seasonal=False)
            var = sidx ** 2 * var_bare
        sd = np.sqrt(np.maximum(var, 0.0))
        for lv in levels:
            z = norm.ppf(0.5 + lv / 2.0)
            intervals[lv] = (point - z * sd, point + z * sd)
    for lower, upper in intervals.values():
        lower.setflags(write=False)
        upper.setflags(write=False)
    point.setflags(write=False)
    return Forecast(point=point, intervals=intervals, source=fit.descriptor, method=method)
