"""Forecast-encompassing evaluation: lagged-value AR benchmarks, growth to
level conversion, and the encompassing regression with robust t-statistics."""

from .ar import ARFit, ARForecaster, ARSpec, RollingScheme, fit_ar, iterate_forecast, rolling_forecasts
from .components import (
    AggregateForecast,
    Component,
    ComponentModelSpec,
    build_component_forecasts,
    csar4,
    isar4,
    osar4,
    other_from_identity,
    ysar4,
)
from .csvio import load_forecast_csv, load_series_csv, write_forecast_csv, write_series_csv
from .exceptions import (
    CollinearityError,
    ConfigError,
    DataError,
    DegenerateTargetError,
    EncompassError,
    IdentificationError,
    NumericalError,
)
from .levels import growth_to_levels, levels_to_log
from .quarter import Quarter, distance
from .regression import (
    EncompassingRegression,
    EncompassResult,
    RegressionData,
    build_design,
    encompass,
    ols3,
    rmse,
    robust_cov,
)
from .series import ForecastPanel, Series, diff_s, log_series

__version__ = "0.1.0"
