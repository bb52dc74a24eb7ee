"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PoolcastError(Exception):
    """Base class for all package errors."""


class ConfigError(PoolcastError):
    """Invalid experiment configuration (CLI exit code 2)."""


class DatasetError(PoolcastError):
    """Dataset could not be loaded or validated (CLI exit code 3)."""


class MalformedRow(DatasetError):
    def __init__(self, line_number: int, byte_offset: int, detail: str):
        self.line_number = line_number
        self.byte_offset = byte_offset
        self.detail = detail
        super().__init__(
            f"malformed row at line {line_number} (byte offset {byte_offset}): {detail}"
        )


class NonFiniteValue(DatasetError):
    def __init__(self, series_id: str):
        self.series_id = series_id
        super().__init__(f"series {series_id!r} contains a non-finite value")


class HorizonTooLarge(DatasetError):
    def __init__(self, series_id: str, detail: str = ""):
        self.series_id = series_id
        super().__init__(f"series {series_id!r}: horizon too large for series length. {detail}".rstrip())


class FitError(PoolcastError):
    """A single candidate model could not be fitted."""


class InapplicableModel(FitError):
    """The requested ETS form is one of the disallowed unstable combinations."""


class NonPositiveData(FitError):
    """Multiplicative components require strictly positive training data."""


class DegenerateSeries(FitError):
    """The series does not identify the requested model (e.g. constant data
    with multiplicative seasonality)."""


class InsufficientData(FitError):
    """Training sample too short for the number of parameters."""


class OptimizationFailed(FitError):
    """The likelihood optimizer never produced a finite objective."""


class NonStationaryFit(FitError):
    """An AR polynomial root lies inside the stationarity margin."""


class NonInvertibleFit(FitError):
    """An MA polynomial root lies inside the invertibility margin."""


class AllModelsFailed(PoolcastError):
    """No candidate in the pool produced a usable fit."""


class SeriesTooShort(PoolcastError):
    """Not enough observations for the requested statistic."""


class SampleTooSmall(PoolcastError):
    """AICc undefined: n <= k + 1."""


class ZeroDenominator(PoolcastError):
    """Seasonal-naive scaling denominator is zero."""


class DegenerateVariance(PoolcastError):
    """Loss differentials are identical; the DM test is undefined."""


class EmptyProfileClass(PoolcastError):
    """Balanced pool enumeration requires at least one model per profile class."""


class IdMismatch(PoolcastError):
    """Two record collections do not cover the same series ids."""


class DatasetMismatch(PoolcastError):
    """Reports being compared were not produced from the same dataset."""
