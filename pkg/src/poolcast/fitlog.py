"""Per-candidate bookkeeping shared by the ETS and ARIMA selection routines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelFitLogEntry:
    """One candidate's outcome inside a selection or search run."""

    descriptor: str
    status: str  # "ok", "excluded", or "error"
    criterion: float | None
    reason: str | None
    seconds: float
