"""Canonical data types, dataset ingestion, and fixed-origin splitting.

Series values are immutable float64 arrays. The wide CSV interchange format
is ``id,period_s,horizon_h,category,v1,...,vN`` without a header; a JSONL
alternative uses one object per line with keys ``id``, ``s``, ``h``,
``category`` and ``values``. Both round-trip losslessly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetError, HorizonTooLarge, MalformedRow, NonFiniteValue

DEFAULT_HORIZONS = {1: 6, 4: 8, 12: 18}
FREQUENCY_LABELS = {1: "yearly", 4: "quarterly", 12: "monthly"}


def _frozen_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """One observed series with its seasonal period and holdout horizon."""

    id: str
    period_s: int
    values: np.ndarray
    horizon_h: int
    category: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if not self.id:
            raise DatasetError("series id must be non-empty")
        if self.period_s < 1:
            raise DatasetError(f"series {self.id!r}: period_s must be >= 1")
        if self.horizon_h < 1:
            raise DatasetError(f"series {self.id!r}: horizon_h must be >= 1")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteValue(self.id)
        min_train = max(3, 2 * self.period_s)
        if len(self.values) < self.horizon_h + min_train:
            raise HorizonTooLarge(
                self.id,
                f"need N >= h + max(3, 2s) = {self.horizon_h + min_train}, got N = {len(self.values)}",
            )

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def frequency_label(self) -> str:
        return FREQUENCY_LABELS.get(self.period_s, "other")


@dataclass(frozen=True)
class SplitSeries:
    """Fixed-origin train/test partition of a TimeSeries."""

    train: np.ndarray
    test: np.ndarray
    origin: int

    def __post_init__(self):
        object.__setattr__(self, "train", _frozen_array(self.train))
        object.__setattr__(self, "test", _frozen_array(self.test))
        if self.origin != len(self.train):
            raise DatasetError("split origin must equal the training length")

    @property
    def horizon(self) -> int:
        return len(self.test)


@dataclass(frozen=True)
class Dataset:
    """A collection of series sharing (at most) one sampling frequency."""

    series: tuple[TimeSeries, ...]
    frequency_label: str = field(default="other")

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        ids = [s.id for s in self.series]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DatasetError(f"duplicate series ids: {dupes}")

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(self.series)

    def get(self, series_id: str) -> TimeSeries:
        for s in self.series:
            if s.id == series_id:
                return s
        raise KeyError(series_id)


def infer_frequency_label(series) -> str:
    periods = {s.period_s for s in series}
    if len(periods) == 1:
        return FREQUENCY_LABELS.get(periods.pop(), "other")
    return "other"


def split_fixed_origin(series: TimeSeries) -> SplitSeries:
    """Withhold the last ``horizon_h`` observations as the test segment."""
    n = series.n - series.horizon_h
    return SplitSeries(train=series.values[:n], test=series.values[n:], origin=n)


def _default_horizon(series_id: str, period_s: int) -> int:
    try:
        return DEFAULT_HORIZONS[period_s]
    except KeyError:
        raise DatasetError(
            f"series {series_id!r}: no horizon given and no default for period_s={period_s}"
        ) from None


def _parse_values(series_id: str, cells: list[str], line_no: int, offset: int) -> np.ndarray:
    # Trailing empty cells are permitted and ignored.
    while cells and cells[-1] == "":
        cells.pop()
    if not cells:
        raise MalformedRow(line_no, offset, "row has no observations")
    out = np.empty(len(cells), dtype=np.float64)
    for i, cell in enumerate(cells):
        try:
            out[i] = float(cell)
        except ValueError:
            raise MalformedRow(line_no, offset, f"cannot parse value {cell!r}") from None
    if not np.all(np.isfinite(out)):
        raise NonFiniteValue(series_id)
    return out


def _series_from_wide_row(line: str, line_no: int, offset: int) -> TimeSeries:
    cells = line.rstrip("\n").rstrip("\r").split(",")
    if len(cells) < 5:
        raise MalformedRow(line_no, offset, "expected at least id,period_s,horizon_h,category,v1")
    series_id = cells[0].strip()
    if not series_id:
        raise MalformedRow(line_no, offset, "empty series id")
    try:
        period_s = int(cells[1])
    except ValueError:
        raise MalformedRow(line_no, offset, f"bad period_s {cells[1]!r}") from None
    h_cell = cells[2].strip()
    if h_cell == "":
        horizon_h = _default_horizon(series_id, period_s)
    else:
        try:
            horizon_h = int(h_cell)
        except ValueError:
            raise MalformedRow(line_no, offset, f"bad horizon_h {h_cell!r}") from None
    category = cells[3].strip() or None
    values = _parse_values(series_id, cells[4:], line_no, offset)
    return TimeSeries(id=series_id, period_s=period_s, values=values,
                      horizon_h=horizon_h, category=category)


def _series_from_json_record(line: str, line_no: int, offset: int) -> TimeSeries:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRow(line_no, offset, f"invalid JSON: {exc.msg}") from None
    if not isinstance(rec, dict) or "id" not in rec or "s" not in rec or "values" not in rec:
        raise MalformedRow(line_no, offset, "JSONL record needs keys id, s, values")
    series_id = str(rec["id"])
    period_s = int(rec["s"])
    h = rec.get("h")
    horizon_h = _default_horizon(series_id, period_s) if h is None else int(h)
    raw = rec["values"]
    if not isinstance(raw, list) or not raw:
        raise MalformedRow(line_no, offset, "values must be a non-empty list")
    values = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(series_id)
    return TimeSeries(id=series_id, period_s=period_s, values=values,
                      horizon_h=horizon_h, category=rec.get("category"))


def load_dataset(path, format: str = "wide-csv") -> Dataset:
    """Read a dataset file; one TimeSeries per row/record."""
    if format not in ("wide-csv", "jsonl"):
        raise DatasetError(f"unknown dataset format {format!r}")
    parse = _series_from_wide_row if format == "wide-csv" else _series_from_json_record
    series = []
    offset = 0
    try:
        with open(path, "rb") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None
    for line_no, raw in enumerate(raw_lines, start=1):
        text = raw.decode("utf-8")
        if text.strip():
            series.append(parse(text, line_no, offset))
        offset += len(raw)
    return Dataset(series=tuple(series), frequency_label=infer_frequency_label(series))


def _render_value(v: float) -> str:
    # 17 significant digits round-trip every float64 exactly.
    if v == math.floor(v) and abs(v) < 1e16:
        return f"{v:.1f}"
    return f"{v:.17g}"


def save_dataset(dataset: Dataset, path, format: str = "wide-csv") -> None:
    if format not in ("wide-csv", "jsonl"):
        raise DatasetError(f"unknown dataset format {format!r}")
    with open(path, "w", encoding="utf-8") as fh:
        for s in dataset:
            if format == "wide-csv":
                vals = ",".join(_render_value(v) for v in s.values)
                fh.write(f"{s.id},{s.period_s},{s.horizon_h},{s.category or ''},{vals}\n")
            else:
                rec = {
                    "id": s.id,
                    "s": s.period_s,
                    "h": s.horizon_h,
                    "category": s.category,
                    "values": [float(v) for v in s.values],
                }
                fh.write(json.dumps(rec) + "\n")
