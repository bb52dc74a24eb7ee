"""Named ETS pools, order-bounded ARIMA pools, and balanced pool enumeration.

The five ETS pool names resolve to fixed model sets:

==========================  ========================  ==========================
name                        seasonal data             non-seasonal data
==========================  ========================  ==========================
all                         19 models                 8 models
no_mult_trend               15 (drops MMN MMdN MMM    6
                            MMdM)
damped                      12 (drops AAN AAA MAN     5
                            MAA MAM MMN MMM)
match_error_seasonal        16 (drops MNA MAA MAdA)   8
reduced                     8 (intersection of the    4
                            three reductions)
==========================  ========================  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .criteria import criterion_value, all_criteria  # noqa: F401  (public here)
from .errors import EmptyProfileClass
from .ets.models import (
    APPLICABLE_MODELS,
    EtsModelSpec,
    canonical_index,
    parse_descriptor,
    sort_canonical,
)

ETS_POOL_NAMES = ("all", "no_mult_trend", "damped", "match_error_seasonal", "reduced")

PROFILE_CLASSES = ("level_only", "trend_only", "seasonal_only", "trend_and_seasonal")

_NO_MULT_TREND_EXCLUDED = frozenset(parse_descriptor(c) for c in ("MMN", "MMdN", "MMM", "MMdM"))
_DAMPED_EXCLUDED = frozenset(
    parse_descriptor(c) for c in ("AAN", "AAA", "MAN", "MAA", "MAM", "MMN", "MMM")
)
_MATCH_EXCLUDED = frozenset(parse_descriptor(c) for c in ("MNA", "MAA", "MAdA"))


def profile_class(spec: EtsModelSpec) -> str:
    """Classify a model into one of the four broad forecast profiles."""
    if spec.has_trend and spec.has_seasonal:
        return "trend_and_seasonal"
    if spec.has_trend:
        return "trend_only"
    if spec.has_seasonal:
        return "seasonal_only"
    return "level_only"


def ets_pool(name: str, seasonal: bool) -> frozenset[EtsModelSpec]:
    """Resolve a named pool to its model set."""
    if name not in ETS_POOL_NAMES:
        raise ValueError(f"unknown ETS pool {name!r}; expected one of {ETS_POOL_NAMES}")
    pool = set(APPLICABLE_MODELS)
    if name in ("no_mult_trend", "reduced"):
        pool -= _NO_MULT_TREND_EXCLUDED
    if name in ("damped", "reduced"):
        pool -= _DAMPED_EXCLUDED
    if name in ("match_error_seasonal", "reduced"):
        pool -= _MATCH_EXCLUDED
    if not seasonal:
        pool = {m for m in pool if not m.has_seasonal}
    return frozenset(pool)


@dataclass(frozen=True)
class ModelPool:
    """A named candidate set: either an ETS model set or an ARIMA order bound."""

    family: str  # "ets" or "arima"
    label: str
    ets_specs: frozenset[EtsModelSpec] | None = None
    arima_max_order: int | None = None

    def __post_init__(self):
        if self.family not in ("ets", "arima"):
            raise ValueError(f"family must be 'ets' or 'arima', got {self.family!r}")
        if (self.ets_specs is None) == (self.arima_max_order is None):
            raise ValueError("exactly one of ets_specs / arima_max_order must be set")


def resolve_pool(label: str, seasonal: bool = True) -> ModelPool:
    """Parse a pool label like "ets:reduced" or "arima:K3"."""
    try:
        family, spec = label.split(":", 1)
    except ValueError:
        raise ValueError(f"pool label {label!r} must look like 'ets:<name>' or 'arima:K<k>'") from None
    if family == "ets":
        name = {"match": "match_error_seasonal"}.get(spec, spec)
        return ModelPool(family="ets", label=label, ets_specs=ets_pool(name, seasonal))
    if family == "arima":
        if not spec.startswith("K"):
            raise ValueError(f"ARIMA pool label {label!r} must look like 'arima:K<k>'")
        k = int(spec[1:])
        if not 1 <= k <= 8:
            raise ValueError(f"ARIMA max order must be in 1..8, got {k}")
        return ModelPool(family="arima", label=label, arima_max_order=k)
    raise ValueError(f"unknown pool family {family!r}")


def partition_by_profile(models: Iterable[EtsModelSpec]) -> dict[str, list[EtsModelSpec]]:
    out: dict[str, list[EtsModelSpec]] = {c: [] for c in PROFILE_CLASSES}
    for m in sort_canonical(models):
        out[profile_class(m)].append(m)
    return out


def balanced_pool_count(models: Iterable[EtsModelSpec], seasonal: bool) -> int:
    """Closed-form count of subsets with at least one model per profile class."""
    classes = _applicable_classes(models, seasonal)
    total = 1
    for members in classes:
        total *= 2 ** len(members) - 1
    return total


def _applicable_classes(models: Iterable[EtsModelSpec], seasonal: bool) -> list[list[EtsModelSpec]]:
    parts = partition_by_profile(models)
    if seasonal:
        names = PROFILE_CLASSES
    else:
        names = ("level_only", "trend_only")
        leftover = parts["seasonal_only"] + parts["trend_and_seasonal"]
        if leftover:
            raise ValueError(
                "non-seasonal enumeration got seasonal models: "
                + ", ".join(m.descriptor for m in leftover)
            )
    classes = []
    for name in names:
        members = parts[name]
        if not members:
            raise EmptyProfileClass(f"profile class {name!r} has no models")
        classes.append(members)
    return classes


def enumerate_balanced_pools(
    models: Iterable[EtsModelSpec], seasonal: bool
) -> Iterator[tuple[EtsModelSpec, ...]]:
    """Yield every pool containing at least one model from each profile class.

    Pools are emitted in lexicographic order over the canonical model
    ordering, each pool itself canonically sorted.
    """
    classes = _applicable_classes(models, seasonal)

    def non_empty_subsets(members: list[EtsModelSpec]) -> list[tuple[EtsModelSpec, ...]]:
        subs = []
        for mask in range(1, 2 ** len(members)):
            subs.append(tuple(m for i, m in enumerate(members) if mask >> i & 1))
        subs.sort(key=lambda pool: tuple(canonical_index(m) for m in pool))
        return subs

    def rec(idx: int, acc: tuple[EtsModelSpec, ...]) -> Iterator[tuple[EtsModelSpec, ...]]:
        if idx == len(classes):
            yield tuple(sort_canonical(acc))
            return
        for sub in subsets[idx]:
            yield from rec(idx + 1, acc + sub)

    subsets = [non_empty_subsets(c) for c in classes]
    yield from rec(0, ())
