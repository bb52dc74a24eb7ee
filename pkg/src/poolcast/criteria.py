"""Penalized-likelihood selection criteria."""

from __future__ import annotations

import math

from .errors import SampleTooSmall

CRITERIA = ("aic", "bic", "aicc")
AICC_FORMS = ("standard", "paper")


def criterion_value(logL: float, k: int, n: int, which: str,
                    aicc_form: str = "standard") -> float:
    """AIC/BIC/AICc from a maximized log-likelihood.

    ``aicc_form`` selects the small-sample correction term: "standard" uses
    2k(k+1)/(n-k-1); "paper" uses k(k+1)/(n-k-1).
    """
    if which not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {which!r}")
    if aicc_form not in AICC_FORMS:
        raise ValueError(f"aicc_form must be one of {AICC_FORMS}, got {aicc_form!r}")
    aic = -2.0 * logL + 2.0 * k
    if which == "aic":
        return aic
    if which == "bic":
        return aic + k * (math.log(n) - 2.0)
    if n <= k + 1:
        raise SampleTooSmall(f"AICc undefined for n={n}, k={k}")
    correction = k * (k + 1) / (n - k - 1)
    if aicc_form == "standard":
        correction *= 2.0
    return aic + correction


def all_criteria(logL: float, k: int, n: int, aicc_form: str = "standard") -> dict[str, float]:
    return {c: criterion_value(logL, k, n, c, aicc_form=aicc_form) for c in CRITERIA}
