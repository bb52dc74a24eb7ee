from .order import ArimaOrder, ArimaFit, parse_order_descriptor
from .stationarity import kpss_statistic, seasonal_strength, choose_differencing
from .fit import arima_fit
from .forecast import arima_forecast
from .search import arima_search_exhaustive, arima_search_stepwise, order_tuples

__all__ = [
    "ArimaOrder",
    "ArimaFit",
    "parse_order_descriptor",
    "kpss_statistic",
    "seasonal_strength",
    "choose_differencing",
    "arima_fit",
    "arima_forecast",
    "arima_search_exhaustive",
    "arima_search_stepwise",
    "order_tuples",
]
