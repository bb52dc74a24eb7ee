"""ETS model taxonomy: component codes, applicability, canonical ordering.

Models are named by three-letter acronyms (error, trend, seasonality), e.g.
"ANN" for additive error, no trend, no seasonality, or "MAdM" for
multiplicative error, damped additive trend, multiplicative seasonality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

ERROR_KINDS = ("A", "M")
TREND_KINDS = ("N", "A", "Ad", "M", "Md")
SEASONAL_KINDS = ("N", "A", "M")


@dataclass(frozen=True, order=True)
class EtsModelSpec:
    """Structural description of one exponential smoothing model."""

    error: str
    trend: str
    seasonal: str

    def __post_init__(self):
        if self.error not in ERROR_KINDS:
            raise ValueError(f"error must be one of {ERROR_KINDS}, got {self.error!r}")
        if self.trend not in TREND_KINDS:
            raise ValueError(f"trend must be one of {TREND_KINDS}, got {self.trend!r}")
        if self.seasonal not in SEASONAL_KINDS:
            raise ValueError(f"seasonal must be one of {SEASONAL_KINDS}, got {self.seasonal!r}")

    @property
    def descriptor(self) -> str:
        return f"{self.error}{self.trend}{self.seasonal}"

    @property
    def damped(self) -> bool:
        return self.trend in ("Ad", "Md")

    @property
    def has_trend(self) -> bool:
        return self.trend != "N"

    @property
    def has_seasonal(self) -> bool:
        return self.seasonal != "N"

    @property
    def multiplicative_trend(self) -> bool:
        return self.trend in ("M", "Md")

    def __str__(self) -> str:
        return self.descriptor


def _spec(code: str) -> EtsModelSpec:
    return parse_descriptor(code)


def parse_descriptor(code: str) -> EtsModelSpec:
    """Parse an acronym like "MAdM" back into an EtsModelSpec."""
    if len(code) < 3:
        raise ValueError(f"bad ETS descriptor {code!r}")
    error = code[0]
    rest = code[1:]
    if rest[:-1] in ("Ad", "Md"):
        trend, seasonal = rest[:-1], rest[-1]
    else:
        trend, seasonal = rest[0], rest[1:]
    return EtsModelSpec(error=error, trend=trend, seasonal=seasonal)


# Table-style row-major ordering: additive-error block first, trend rows
# N, A, Ad, M, Md, seasonal columns N, A, M within each row.
CANONICAL_ORDER: tuple[EtsModelSpec, ...] = tuple(
    EtsModelSpec(error=e, trend=t, seasonal=s)
    for e in ERROR_KINDS
    for t in TREND_KINDS
    for s in SEASONAL_KINDS
)

_CANONICAL_INDEX: Mapping[EtsModelSpec, int] = {m: i for i, m in enumerate(CANONICAL_ORDER)}

# The 19 stable forms; the remaining 11 combinations are prone to estimation
# difficulties and infinite forecast variance and are never fitted.
APPLICABLE_MODELS: frozenset[EtsModelSpec] = frozenset(
    _spec(c)
    for c in (
        "ANN", "ANA",
        "AAN", "AAA",
        "AAdN", "AAdA",
        "MNN", "MNA", "MNM",
        "MAN", "MAA", "MAM",
        "MAdN", "MAdA", "MAdM",
        "MMN", "MMM",
        "MMdN", "MMdM",
    )
)

# Prediction intervals for these four require simulation.
SIMULATION_ONLY_MODELS: frozenset[EtsModelSpec] = frozenset(
    _spec(c) for c in ("MMN", "MMdN", "MMM", "MMdM")
)


def canonical_index(spec: EtsModelSpec) -> int:
    return _CANONICAL_INDEX[spec]


def sort_canonical(specs) -> list[EtsModelSpec]:
    return sorted(specs, key=canonical_index)


def is_applicable(spec: EtsModelSpec) -> bool:
    return spec in APPLICABLE_MODELS


def parameter_count(spec: EtsModelSpec, period_s: int) -> int:
    """Total estimated parameters: smoothing/damping + free initial states + variance."""
    k = 1 + 1  # alpha + l0
    if spec.has_trend:
        k += 2  # beta + b0
    if spec.damped:
        k += 1  # phi
    if spec.has_seasonal:
        k += 1 + (period_s - 1)  # gamma + free seasonal states (one constrained)
    return k + 1  # innovation variance


@dataclass(frozen=True)
class EtsFit:
    """A fitted ETS model with its likelihood and selection bookkeeping."""

    spec: EtsModelSpec
    period_s: int
    alpha: float
    beta: float | None
    gamma: float | None
    phi: float | None
    initial_level: float
    initial_trend: float | None
    initial_seasonal: np.ndarray | None
    final_level: float
    final_trend: float | None
    final_seasonal: np.ndarray | None
    sigma2: float
    logL: float
    k: int
    n: int
    criteria: dict[str, float]
    fitted: np.ndarray
    residuals: np.ndarray
    fit_seconds: float

    @property
    def descriptor(self) -> str:
        return self.spec.descriptor


@dataclass(frozen=True)
class Forecast:
    """Point forecasts plus prediction intervals per confidence level."""

    point: np.ndarray
    intervals: dict[float, tuple[np.ndarray, np.ndarray]]
    source: str
    method: str  # "analytic" or "simulated"

    def lower(self, level: float) -> np.ndarray:
        return self.intervals[level][0]

    def upper(self, level: float) -> np.ndarray:
        return self.intervals[level][1]
