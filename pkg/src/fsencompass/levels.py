"""Growth-rate forecast paths to level and log-level paths."""
from __future__ import annotations

import numpy as np

from .exceptions import DataError
from .series import ForecastPanel, Series


def _quarterly_factors(growth: np.ndarray, annualized: bool) -> np.ndarray:
    if np.any(growth <= -100.0):
        raise DataError("growth rate <= -100% cannot be compounded")
    if annualized:
        return np.exp(np.log1p(growth / 100.0) / 4.0)
    return 1.0 + growth / 100.0


def growth_path_to_levels(anchor: float, growth, annualized: bool = False) -> np.ndarray:
    growth = np.asarray(growth, dtype=float)
    return anchor * np.cumprod(_quarterly_factors(growth, annualized))


def levels_path_to_growth(anchor: float, levels, annualized: bool = False) -> np.ndarray:
    """Inverse of :func:`growth_path_to_levels`."""
    levels = np.asarray(levels, dtype=float)
    prev = np.concatenate(([anchor], levels[:-1]))
    ratio = levels / prev
    if annualized:
        return 100.0 * np.expm1(4.0 * np.log(ratio))
    return 100.0 * (ratio - 1.0)


def growth_to_levels(panel: ForecastPanel, actuals: Series, annualized: bool = False) -> ForecastPanel:
    """Compound each growth path from the actual level at its origin (the
    quarter before the first forecast quarter)."""
    if panel.form != "growth_pct":
        raise DataError(f"expected a growth_pct panel, got {panel.form}")
    if actuals.in_logs:
        raise DataError(f"anchor series {actuals.name!r} must be in levels")

    def convert(origin, path):
        anchor = actuals.get(origin)
        if anchor is None:
            raise DataError(f"no actual {actuals.name!r} value at origin {origin} to anchor levels")
        try:
            return growth_path_to_levels(anchor, path, annualized)
        except DataError as exc:
            raise DataError(f"origin {origin}: {exc}") from None

    return panel.map_paths(convert, form="level")


def levels_to_log(panel: ForecastPanel) -> ForecastPanel:
    if panel.form != "level":
        raise DataError(f"expected a level panel, got {panel.form}")

    def convert(origin, path):
        if np.any(~(path > 0)):
            raise DataError(f"nonpositive level forecast at origin {origin} in {panel.model}")
        return np.log(path)

    return panel.map_paths(convert, form="log_level")


def to_log_levels(panel: ForecastPanel, actuals: Series | None = None,
                  annualized: bool = False) -> ForecastPanel:
    """Bring any panel form to log levels; growth panels need level actuals."""
    if panel.form == "log_level":
        return panel
    if panel.form == "growth_pct":
        if actuals is None:
            raise DataError(f"growth panel {panel.model} needs anchor actuals")
        panel = growth_to_levels(panel, actuals, annualized)
    return levels_to_log(panel)
