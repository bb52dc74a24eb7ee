"""poolcast: forecasting with configurable ETS/ARIMA model pools and a
benchmark harness measuring accuracy, uncertainty quality, and cost."""

__version__ = "0.1.0"

from .core import Dataset, SplitSeries, TimeSeries, load_dataset, save_dataset, split_fixed_origin
from .criteria import criterion_value

__all__ = [
    "Dataset",
    "SplitSeries",
    "TimeSeries",
    "load_dataset",
    "save_dataset",
    "split_fixed_origin",
    "criterion_value",
    "__version__",
]
