"""Forward simulation of an ETS process from given parameters.

Used to generate ground-truth data for recovery experiments. The seasonal
state array follows the engine convention: position 0 holds the most recent
pre-sample index, position m-1 the index consumed by the first observation.
"""

from __future__ import annotations

import numpy as np

from .. import _ets_kernels as _kernels
from .fit import _component_codes
from .models import EtsModelSpec


def simulate_ets(spec: EtsModelSpec, n: int, period_s: int = 1, *,
                 alpha: float, beta: float = 0.0, gamma: float = 0.0,
                 phi: float = 1.0, level: float, trend: float = 0.0,
                 seasonal=None, sigma: float, rng: np.random.Generator) -> np.ndarray:
    if spec.has_seasonal:
        if seasonal is None:
            raise ValueError("seasonal initial states required for a seasonal model")
        s_state = np.ascontiguousarray(seasonal, dtype=np.float64)
        if len(s_state) != period_s:
            raise ValueError("seasonal state length must equal period_s")
    else:
        s_state = np.zeros(1)
    error, trend_code, season_code = _component_codes(spec)
    eps = rng.standard_normal((1, n)) * sigma
    out = _kernels.ets_simulate_paths(
        float(level), float(trend), s_state, period_s,
        error, trend_code, season_code,
        float(alpha), float(beta), float(gamma), float(phi), eps,
    )
    return out[0]
