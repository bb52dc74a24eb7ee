"""Information-criterion selection across a pool of ETS candidates."""

from __future__ import annotations

import numpy as np

from ..errors import AllModelsFailed, FitError
from ..fitlog import ModelFitLogEntry
from .fit import ets_fit
from .models import EtsFit, sort_canonical


def ets_select(train, period_s: int, pool, criterion: str = "aicc", *,
               aicc_form: str = "standard") -> tuple[EtsFit, list[ModelFitLogEntry]]:
    """Fit every candidate in the pool and return the criterion-minimal fit.

    Candidates are visited in the canonical table order, which also breaks
    exact criterion ties. Seasonal forms are dropped when period_s == 1;
    multiplicative-error/seasonal forms are dropped (and logged as excluded)
    when the training data contain values <= 0. Raises AllModelsFailed when
    nothing fits.
    """
    y = np.asarray(train, dtype=np.float64)
    candidates = sort_canonical(pool)
    if period_s == 1:
        candidates = [c for c in candidates if not c.has_seasonal]
    if not candidates:
        raise AllModelsFailed("pool is empty after removing seasonal candidates")
    has_nonpositive = bool(np.min(y) <= 0)

    log: list[ModelFitLogEntry] = []
    best: EtsFit | None = None
    best_value = np.inf
    for spec in candidates:
        if has_nonpositive and (spec.error == "M" or spec.seasonal == "M"):
            log.append(ModelFitLogEntry(spec.descriptor, "excluded", None,
                                        "non-positive data", 0.0))
            continue
        try:
            fit = ets_fit(y, period_s, spec, aicc_form=aicc_form)
        except FitError as exc:
            log.append(ModelFitLogEntry(spec.descriptor, "error", None,
                                        f"{type(exc).__name__}: {exc}", 0.0))
            continue
        value = fit.criteria[criterion]
        log.append(ModelFitLogEntry(spec.descriptor, "ok", value, None, fit.fit_seconds))
        if np.isfinite(value) and value < best_value:
            best = fit
            best_value = value
    if best is None:
        raise AllModelsFailed("no ETS candidate produced a usable fit")
    return best, log
