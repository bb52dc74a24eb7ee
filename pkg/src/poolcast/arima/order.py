"""Seasonal ARIMA order descriptions and fitted-model containers."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, order=True)
class ArimaOrder:
    """ARIMA(p,d,q)(P,D,Q)_s structure with an optional constant term."""

    p: int
    d: int
    q: int
    P: int = 0
    D: int = 0
    Q: int = 0
    period_s: int = 1
    with_constant: bool = False

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.period_s < 1:
            raise ValueError("period_s must be >= 1")
        if self.period_s == 1 and (self.P or self.D or self.Q):
            raise ValueError("seasonal terms require period_s > 1")
        if self.with_constant and self.d + self.D > 1:
            raise ValueError("a constant requires d + D <= 1")

    def order(self) -> int:
        return self.p + self.q + self.P + self.Q

    @property
    def descriptor(self) -> str:
        base = f"ARIMA({self.p},{self.d},{self.q})"
        if self.period_s > 1:
            base += f"({self.P},{self.D},{self.Q})[{self.period_s}]"
        if self.with_constant:
            base += "+c"
        return base

    def __str__(self) -> str:
        return self.descriptor


_DESCRIPTOR_RE = re.compile(
    r"^ARIMA\((\d+),(\d+),(\d+)\)(?:\((\d+),(\d+),(\d+)\)\[(\d+)\])?(\+c)?$"
)


def parse_order_descriptor(text: str) -> ArimaOrder:
    m = _DESCRIPTOR_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad ARIMA descriptor {text!r}")
    p, d, q = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if m.group(4) is not None:
        P, D, Q, s = int(m.group(4)), int(m.group(5)), int(m.group(6)), int(m.group(7))
    else:
        P = D = Q = 0
        s = 1
    return ArimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q, period_s=s,
                      with_constant=m.group(8) is not None)


@dataclass(frozen=True)
class ArimaFit:
    """Maximum-likelihood fit of one seasonal ARIMA model."""

    order: ArimaOrder
    ar: np.ndarray
    ma: np.ndarray
    sar: np.ndarray
    sma: np.ndarray
    constant: float | None
    sigma2: float
    logL: float
    k: int
    n_effective: int
    criteria: dict[str, float]
    fit_seconds: float
    train: np.ndarray
    final_state: np.ndarray

    @property
    def descriptor(self) -> str:
        return self.order.descriptor
