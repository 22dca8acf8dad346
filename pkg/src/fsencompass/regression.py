"""Encompassing regression of realized s-period changes on two forecasts.

For target quarter ``t`` and horizon ``s`` the regression is

    Y_t - Y_{t-s} = alpha + beta (Ya_t - Y_{t-s}) + gamma (Yb_t - Y_{t-s}) + u_t

where both forecasts were made at the end of ``t-s``. The error of an
s-step forecast is an MA(s-1) process, so coefficient standard errors come
from a heteroskedasticity and autocorrelation consistent sandwich with
``L = s - 1`` lags. With ``s = 1`` this is the White estimator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ._linalg import RANK_TOL, svd_lstsq
from .exceptions import (
    CollinearityError,
    DataError,
    DegenerateTargetError,
    IdentificationError,
)
from .quarter import Quarter, as_quarter
from .series import ForecastPanel, Series

logger = logging.getLogger(__name__)

COV_METHODS = ("white", "truncated_hac", "bartlett_hac", "plain_ols")
COEF_NAMES = ("alpha", "beta", "gamma")
MIN_ROWS = 5


@dataclass(frozen=True, eq=False)
class RegressionData:
    s: int
    targets: tuple
    y: np.ndarray
    xa: np.ndarray
    xb: np.ndarray
    dropped: int = 0

    @property
    def nobs(self) -> int:
        return self.y.size

    @property
    def X(self) -> np.ndarray:
        return np.column_stack([np.ones(self.nobs), self.xa, self.xb])

    @property
    def realized_range(self):
        return (self.targets[0], self.targets[-1]) if self.targets else (None, None)


@dataclass(frozen=True, eq=False)
class OLSFit:
    coef: np.ndarray
    residuals: np.ndarray
    se_regression: float
    r2: float
    singular_values: np.ndarray


@dataclass(frozen=True, eq=False)
class EncompassResult:
    alpha: float
    beta: float
    gamma: float
    tstats: tuple
    se_regression: float
    r2: float
    nobs: int
    cov_method: str
    L: int
    s: int = 1
    dropped: int = 0
    cov: np.ndarray = None
    first_target: Quarter | None = None
    last_target: Quarter | None = None
    warnings: tuple = field(default_factory=tuple)

    @property
    def coef(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])

    @property
    def stderr(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.sqrt(np.diag(self.cov))


# ---------------------------------------------------------------- design


def _check_forms(actual: Series, *panels: ForecastPanel):
    want = "log_level" if actual.in_logs else "level"
    for panel in panels:
        if panel.form != want:
            raise DataError(
                f"panel {panel.model}/{panel.variable} is {panel.form} but actual "
                f"{actual.name!r} needs {want} forecasts"
            )


def _candidate_targets(actual: Series, panels, s: int, period) -> list[Quarter]:
    lo = actual.start + s
    hi = actual.end
    for panel in panels:
        if not panel.origins:
            return []
        lo = max(lo, panel.origins[0] + s)
        hi = min(hi, panel.origins[-1] + s)
    if period is not None:
        first, last = (as_quarter(q) for q in period)
        if last < first:
            raise DataError(f"evaluation period {first}..{last} is not ordered")
        lo, hi = max(lo, first), min(hi, last)
    return [lo + k for k in range(hi - lo + 1)] if hi >= lo else []


def build_design(actual: Series, fa: ForecastPanel, fb: ForecastPanel, s: int,
                 period=None) -> RegressionData:
    """One row per target quarter with every ingredient available.

    The requested period is intersected with the span the data can cover;
    targets inside that span missing any ingredient are counted in
    ``dropped``.
    """
    s = int(s)
    if s < 1:
        raise DataError(f"horizon s must be >= 1, got {s}")
    _check_forms(actual, fa, fb)
    targets, ys, xas, xbs = [], [], [], []
    dropped = 0
    for t in _candidate_targets(actual, (fa, fb), s, period):
        origin = t - s
        base = actual.get(origin)
        yt = actual.get(t)
        a = fa.get(origin, s)
        b = fb.get(origin, s)
        if base is None or yt is None or a is None or b is None:
            dropped += 1
            continue
        targets.append(t)
        ys.append(yt - base)
        xas.append(a - base)
        xbs.append(b - base)
    if not targets:
        raise DataError(
            f"no usable rows for s={s} ({fa.model} vs {fb.model} on {actual.name!r})"
        )
    return RegressionData(s, tuple(targets), np.array(ys), np.array(xas), np.array(xbs), dropped)


# ---------------------------------------------------------------- estimation


def ols_arrays(X: np.ndarray, y: np.ndarray, names=COEF_NAMES) -> OLSFit:
    n, k = X.shape
    if n < MIN_ROWS:
        raise DataError(f"need at least {MIN_ROWS} rows, got {n}")
    try:
        coef, sv = svd_lstsq(X, y, names)
    except CollinearityError as exc:
        pair = exc.pair
        raise IdentificationError(
            f"{pair[0]} and {pair[1]} are not separately identified: {exc}", pair=pair
        ) from None
    if np.ptp(y) == 0.0:
        raise DegenerateTargetError("left-hand-side variable is constant; R^2 undefined")
    resid = y - X @ coef
    ssr = float(resid @ resid)
    centered = y - y.mean()
    tss = float(centered @ centered)
    return OLSFit(coef, resid, float(np.sqrt(ssr / (n - k))), 1.0 - ssr / tss, sv)


def ols3(data: RegressionData) -> OLSFit:
    """OLS of the s-period change on a constant and the two forecast changes."""
    return ols_arrays(data.X, data.y)


def _bread(X: np.ndarray) -> np.ndarray:
    # (X'X)^-1 from the SVD of X
    _, sv, Vt = np.linalg.svd(X, full_matrices=False)
    if sv[-1] / sv[0] < RANK_TOL:
        raise CollinearityError("design matrix is rank deficient")
    return (Vt.T / sv**2) @ Vt


def hac_meat(X: np.ndarray, residuals: np.ndarray, L: int, kernel: str = "truncated") -> np.ndarray:
    """``Gamma_0 + sum_j w_j (Gamma_j + Gamma_j')`` with
    ``Gamma_j = sum_t u_t u_{t-j} x_t x_{t-j}'``."""
    Z = X * residuals[:, None]
    S = Z.T @ Z
    for j in range(1, L + 1):
        w = 1.0 if kernel == "truncated" else 1.0 - j / (L + 1.0)
        G = Z[j:].T @ Z[:-j]
        S = S + w * (G + G.T)
    return S


def robust_cov(data, residuals, method: str = "truncated_hac", L: int = 0,
               warnings: list | None = None) -> np.ndarray:
    """Coefficient covariance ``(X'X)^-1 S (X'X)^-1``.

    ``data`` is a :class:`RegressionData` or a design matrix. ``white`` is
    the truncated estimator with ``L = 0``; ``plain_ols`` is the classical
    ``s^2 (X'X)^-1`` with ``s^2 = u'u / (n - k)``. A truncated-kernel meat
    that is not positive semidefinite is reported through ``warnings``.
    """
    if method not in COV_METHODS:
        raise DataError(f"unknown covariance method {method!r}; expected one of {COV_METHODS}")
    X = data.X if isinstance(data, RegressionData) else np.asarray(data, dtype=float)
    u = np.asarray(residuals, dtype=float)
    n, k = X.shape
    L = 0 if method in ("white", "plain_ols") else int(L)
    if L < 0 or L >= n:
        raise DataError(f"lag truncation L={L} must satisfy 0 <= L < n={n}")
    bread = _bread(X)
    if method == "plain_ols":
        return float(u @ u) / (n - k) * bread
    kernel = "bartlett" if method == "bartlett_hac" else "truncated"
    S = hac_meat(X, u, L, kernel)
    if kernel == "truncated" and L > 0:
        eig = np.linalg.eigvalsh(S)
        if eig[0] < -1e-12 * max(abs(eig[-1]), 1e-300):
            msg = (f"truncated HAC meat is not positive semidefinite (min eigenvalue "
                   f"{eig[0]:.3g}); bartlett_hac guarantees PSD")
            logger.warning(msg)
            if warnings is not None:
                warnings.append(msg)
    V = bread @ S @ bread
    return (V + V.T) / 2.0


def default_lag(method: str, s: int) -> int:
    return int(s) - 1 if method in ("truncated_hac", "bartlett_hac") else 0


def fit_arrays(y, xa, xb, cov: str = "truncated_hac", L: int = 0, s: int = 1,
               dropped: int = 0, targets=None) -> EncompassResult:
    """Encompassing regression on plain arrays of s-period changes."""
    y = np.asarray(y, dtype=float)
    X = np.column_stack([np.ones(y.size), np.asarray(xa, dtype=float), np.asarray(xb, dtype=float)])
    fit = ols_arrays(X, y)
    notes: list[str] = []
    V = robust_cov(X, fit.residuals, cov, L, warnings=notes)
    with np.errstate(invalid="ignore", divide="ignore"):
        diag = np.diag(V)
        tstats = np.where(diag > 0, fit.coef / np.sqrt(np.where(diag > 0, diag, 1.0)), np.nan)
    if np.any(~(diag > 0)):
        notes.append("non-positive variance on the covariance diagonal; t-statistic set to NaN")
    first = targets[0] if targets else None
    last = targets[-1] if targets else None
    return EncompassResult(
        alpha=float(fit.coef[0]), beta=float(fit.coef[1]), gamma=float(fit.coef[2]),
        tstats=tuple(float(t) for t in tstats), se_regression=fit.se_regression, r2=fit.r2,
        nobs=int(y.size), cov_method=cov, L=0 if cov in ("white", "plain_ols") else int(L),
        s=int(s), dropped=int(dropped), cov=V, first_target=first, last_target=last,
        warnings=tuple(notes),
    )


def encompass(actual: Series, fa: ForecastPanel, fb: ForecastPanel, s: int, period=None,
              cov: str = "truncated_hac", L: int | None = None) -> EncompassResult:
    """Build the design for horizon ``s`` and estimate with robust t-statistics.

    ``L`` defaults to ``s - 1`` for the HAC methods. ``plain_ols`` keeps the
    classical standard errors, used when gaps in the forecast record make
    the overlapping-error correction inappropriate.
    """
    if cov not in COV_METHODS:
        raise DataError(f"unknown covariance method {cov!r}; expected one of {COV_METHODS}")
    data = build_design(actual, fa, fb, s, period)
    lag = default_lag(cov, s) if L is None else int(L)
    return fit_arrays(data.y, data.xa, data.xb, cov=cov, L=lag, s=s,
                      dropped=data.dropped, targets=data.targets)


def forecast_errors(panel: ForecastPanel, actual: Series, s: int, period=None):
    """Matched (target, forecast - actual) pairs under the design's rule."""
    _check_forms(actual, panel)
    targets, errors = [], []
    for t in _candidate_targets(actual, (panel,), int(s), period):
        f = panel.get(t - s, s)
        a = actual.get(t)
        if f is None or a is None or actual.get(t - s) is None:
            continue
        targets.append(t)
        errors.append(f - a)
    return targets, np.array(errors)


def rmse(panel: ForecastPanel, actual: Series, s: int, period=None) -> float:
    """Root mean squared s-step error over matched target quarters."""
    _, err = forecast_errors(panel, actual, s, period)
    if err.size == 0:
        raise DataError(f"no matched targets for RMSE of {panel.model} at s={s}")
    return float(np.sqrt(np.mean(err**2)))


class EncompassingRegression(RegressorMixin, BaseEstimator):
    """Scikit-learn style wrapper around the encompassing regression.

    ``X`` holds the two forecast changes ``(Ya - Y_{t-s}, Yb - Y_{t-s})`` in
    its columns and ``y`` the realized change. Rows must be in time order
    for the HAC estimators.

    Parameters
    ----------
    cov_type : {"truncated_hac", "bartlett_hac", "white", "plain_ols"}
    maxlags : int or None
        HAC truncation lag. ``None`` means 0, i.e. one-step forecasts.
    """

    def __init__(self, cov_type="truncated_hac", maxlags=None):
        self.cov_type = cov_type
        self.maxlags = maxlags

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        if X.shape[1] != 2:
            raise ValueError(f"X must have exactly 2 columns (two forecasts), got {X.shape[1]}")
        L = 0 if self.maxlags is None else int(self.maxlags)
        res = fit_arrays(y, X[:, 0], X[:, 1], cov=self.cov_type, L=L, s=L + 1)
        self.result_ = res
        self.intercept_ = res.alpha
        self.coef_ = np.array([res.beta, res.gamma])
        self.cov_params_ = res.cov
        self.bse_ = res.stderr
        self.tvalues_ = np.array(res.tstats)
        self.rsquared_ = res.r2
        self.se_regression_ = res.se_regression
        self.nobs_ = res.nobs
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        return self.intercept_ + X @ self.coef_
