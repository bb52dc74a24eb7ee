from .models import EtsModelSpec, EtsFit, Forecast, canonical_index, parse_descriptor
from .fit import ets_fit, ets_evaluate
from .forecast import ets_forecast
from .select import ets_select
from .simulate import simulate_ets
from ..fitlog import ModelFitLogEntry

__all__ = [
    "EtsModelSpec",
    "EtsFit",
    "Forecast",
    "canonical_index",
    "parse_descriptor",
    "ets_fit",
    "ets_evaluate",
    "ets_forecast",
    "ets_select",
    "simulate_ets",
    "ModelFitLogEntry",
]
