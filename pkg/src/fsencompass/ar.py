"""AR(p) benchmark forecasts on expanding windows.

Each equation regresses a variable on a constant and its first ``p`` lags.
Multi-step forecasts are iterated, feeding one-step predictions back in
place of unavailable actuals.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted, column_or_1d

from ._linalg import svd_lstsq
from .exceptions import DataError, EncompassError
from .quarter import Quarter, as_quarter
from .series import ForecastPanel, Series, log_series


@dataclass(frozen=True)
class ARSpec:
    p: int = 4
    use_logs: bool = True
    include_constant: bool = True

    def __post_init__(self):
        if int(self.p) < 1:
            raise DataError(f"AR order must be >= 1, got {self.p}")
        if not self.include_constant:
            raise DataError("AR equations always include a constant term")


@dataclass(frozen=True)
class ARFit:
    constant: float
    phi: tuple
    window: tuple
    nobs: int

    @property
    def p(self) -> int:
        return len(self.phi)


@dataclass(frozen=True)
class RollingScheme:
    """Fixed estimation start, end quarter advancing one step per origin."""

    estimation_start: Quarter
    first_end: Quarter
    last_end: Quarter
    horizon: int = 16

    def __post_init__(self):
        for name in ("estimation_start", "first_end", "last_end"):
            object.__setattr__(self, name, as_quarter(getattr(self, name)))
        if not self.estimation_start < self.first_end <= self.last_end:
            raise DataError(
                "rolling scheme needs estimation_start < first_end <= last_end, got "
                f"{self.estimation_start}, {self.first_end}, {self.last_end}"
            )
        if int(self.horizon) < 1:
            raise DataError(f"forecast horizon must be >= 1, got {self.horizon}")

    @property
    def origins(self) -> list[Quarter]:
        return [self.first_end + k for k in range(self.last_end - self.first_end + 1)]

    def window(self, end: Quarter) -> tuple[Quarter, Quarter]:
        return (self.estimation_start, end)


def lag_matrix(x: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Design ``[1, x_{t-1}, ..., x_{t-p}]`` and target ``x_t`` for t = p..n-1."""
    n = x.size
    X = np.empty((n - p, p + 1))
    X[:, 0] = 1.0
    for i in range(1, p + 1):
        X[:, i] = x[p - i : n - i]
    return X, x[p:]


def fit_ar_values(x, p: int = 4) -> tuple[float, np.ndarray]:
    """OLS AR(p) with constant on a plain array; returns (constant, phi)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DataError("missing value in AR estimation sample")
    if x.size < 2 * p + 2:
        raise DataError(f"AR({p}) needs at least {2 * p + 2} observations, got {x.size}")
    X, y = lag_matrix(x, p)
    names = ["constant"] + [f"lag{i}" for i in range(1, p + 1)]
    b, _ = svd_lstsq(X, y, names)
    return float(b[0]), b[1:]


def _estimation_values(series: Series, spec: ARSpec) -> Series:
    if spec.use_logs and not series.in_logs:
        return log_series(series)
    return series


def fit_ar(series: Series, spec: ARSpec, window) -> ARFit:
    """Fit on the inclusive quarter window; the first ``p`` quarters of the
    window serve only as lags, so ``nobs = len(window) - p``."""
    first, last = (as_quarter(q) for q in window)
    data = _estimation_values(series, spec)
    x = data.window(first, last)
    if not np.all(np.isfinite(x)):
        bad = first + int(np.flatnonzero(~np.isfinite(x))[0])
        raise DataError(f"missing value in {series.name!r} at {bad} inside window {first}..{last}")
    const, phi = fit_ar_values(x, spec.p)
    return ARFit(const, tuple(float(v) for v in phi), (first, last), x.size - spec.p)


def iterate_forecast(fit: ARFit, history, horizon: int) -> np.ndarray:
    """Iterated forecasts for steps 1..horizon. ``history`` is the last ``p``
    values in time order."""
    history = np.asarray(history, dtype=float).ravel()
    p = fit.p
    if history.size != p:
        raise DataError(f"history must hold {p} values, got {history.size}")
    if int(horizon) < 1:
        raise DataError(f"horizon must be >= 1, got {horizon}")
    buf = [float(v) for v in history]
    out = np.empty(int(horizon))
    for h in range(int(horizon)):
        # accumulate left to right, most recent lag first
        nxt = fit.constant
        for i, coef in enumerate(fit.phi):
            nxt += coef * buf[-1 - i]
        out[h] = nxt
        buf.append(nxt)
    return out


def _forecast_origin(data: Series, spec: ARSpec, scheme: RollingScheme, end: Quarter):
    window = scheme.window(end)
    try:
        fit = fit_ar(data, spec, window)
    except EncompassError as exc:
        raise type(exc)(f"{data.name} window {window[0]}..{window[1]}: {exc}") from exc
    history = data.window(end + (1 - spec.p), end)
    return iterate_forecast(fit, history, scheme.horizon), window


def rolling_forecasts(series: Series, spec: ARSpec, scheme: RollingScheme,
                      model: str = "AR", n_jobs: int | None = None) -> ForecastPanel:
    """Re-fit on ``[estimation_start, e]`` for every end quarter ``e`` and
    forecast ``e+1..e+H``. Paths are returned in the estimation space
    (``log_level`` when ``spec.use_logs``)."""
    data = _estimation_values(series, spec)
    if data.index_of(scheme.estimation_start) is None or data.index_of(scheme.last_end) is None:
        raise DataError(
            f"{series.name!r} ({series.start}..{series.end}) does not cover "
            f"{scheme.estimation_start}..{scheme.last_end}"
        )
    origins = scheme.origins
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(lambda e: _forecast_origin(data, spec, scheme, e), origins))
    else:
        results = [_forecast_origin(data, spec, scheme, e) for e in origins]
    entries = {e: path for e, (path, _) in zip(origins, results)}
    windows = {e: window for e, (_, window) in zip(origins, results)}
    form = "log_level" if spec.use_logs else "level"
    return ForecastPanel(model, series.name, form, entries, windows)


class ARForecaster(BaseEstimator):
    """AR(p) with constant, fit by OLS, forecasting by iteration.

    Parameters
    ----------
    p : int, default=4
        Number of lags.
    use_logs : bool, default=False
        Fit on ``log(y)`` and return forecasts in levels (``exp`` of the
        point forecast, no variance correction).

    Attributes
    ----------
    intercept_ : float
    coef_ : ndarray of shape (p,)
        Lag coefficients, first lag first.
    nobs_ : int
    """

    def __init__(self, p=4, use_logs=False):
        self.p = p
        self.use_logs = use_logs

    def _transform(self, y):
        y = column_or_1d(np.asarray(y, dtype=float))
        if self.use_logs:
            if np.any(y <= 0):
                raise DataError("nonpositive value with use_logs=True")
            y = np.log(y)
        return y

    def fit(self, y, X=None):
        z = self._transform(y)
        const, phi = fit_ar_values(z, int(self.p))
        self.intercept_ = const
        self.coef_ = phi
        self.nobs_ = z.size - int(self.p)
        self.history_ = z[-int(self.p):].copy()
        return self

    def predict(self, horizon=1, history=None):
        """Forecast ``horizon`` steps past the end of the fitted sample, or
        past ``history`` when given (in the original units)."""
        check_is_fitted(self, "coef_")
        hist = self.history_ if history is None else self._transform(history)[-int(self.p):]
        fit = ARFit(self.intercept_, tuple(self.coef_), (None, None), self.nobs_)
        path = iterate_forecast(fit, hist, horizon)
        return np.exp(path) if self.use_logs else path


__all__ = [
    "ARSpec", "ARFit", "RollingScheme", "ARForecaster",
    "fit_ar", "fit_ar_values", "iterate_forecast", "lag_matrix", "rolling_forecasts",
]
