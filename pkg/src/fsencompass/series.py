"""Quarterly series and forecast panels.

Both containers are immutable: their arrays are flagged read-only and the
mappings are copied on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

import numpy as np

from .exceptions import DataError
from .quarter import Quarter, as_quarter

FORMS = ("growth_pct", "level", "log_level")


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Series:
    """A gap-free quarterly index starting at ``start``.

    Missing observations are explicit: ``present[i]`` is False and
    ``values[i]`` is NaN.
    """

    name: str
    start: Quarter
    values: np.ndarray
    present: np.ndarray = None
    unit: str = ""
    in_logs: bool = False

    def __post_init__(self):
        start = as_quarter(self.start)
        values = np.array(self.values, dtype=float, copy=True).ravel()
        if self.present is None:
            present = np.isfinite(values)
        else:
            present = np.array(self.present, dtype=bool, copy=True).ravel()
            if present.shape != values.shape:
                raise DataError("values and present flags differ in length")
            present &= np.isfinite(values)
        values[~present] = np.nan
        present.setflags(write=False)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "present", present)

    @classmethod
    def from_mapping(cls, name: str, data: Mapping, **kwargs) -> "Series":
        """Build from ``{quarter: value}``; quarters absent from the mapping
        between the first and last key become missing entries."""
        if not data:
            raise DataError(f"series {name!r} has no observations")
        items = sorted((as_quarter(k), v) for k, v in data.items())
        start, end = items[0][0], items[-1][0]
        values = np.full(end - start + 1, np.nan)
        for q, v in items:
            values[q - start] = np.nan if v is None else float(v)
        return cls(name, start, values, **kwargs)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def end(self) -> Quarter:
        return self.start + (len(self) - 1)

    @property
    def quarters(self) -> list[Quarter]:
        return [self.start + i for i in range(len(self))]

    @property
    def present_count(self) -> int:
        return int(self.present.sum())

    def index_of(self, q: Quarter) -> int | None:
        i = q - self.start
        return i if 0 <= i < len(self) else None

    def get(self, q: Quarter) -> float | None:
        """Value at ``q`` or None when outside the index or missing."""
        i = self.index_of(q)
        if i is None or not self.present[i]:
            return None
        return float(self.values[i])

    def window(self, first: Quarter, last: Quarter) -> np.ndarray:
        """Values over the inclusive range; raises if it leaves the index."""
        i, j = self.index_of(first), self.index_of(last)
        if i is None or j is None or j < i:
            raise DataError(
                f"window {first}..{last} not inside {self.name} ({self.start}..{self.end})"
            )
        return self.values[i : j + 1]

    def replace(self, **changes) -> "Series":
        kw = dict(
            name=self.name,
            start=self.start,
            values=self.values,
            present=self.present,
            unit=self.unit,
            in_logs=self.in_logs,
        )
        kw.update(changes)
        return Series(**kw)

    def __repr__(self) -> str:
        return (
            f"Series({self.name!r}, {self.start}..{self.end}, "
            f"n={len(self)}, present={self.present_count}, in_logs={self.in_logs})"
        )


@dataclass(frozen=True, eq=False)
class ForecastPanel:
    """Forecast paths keyed by origin quarter.

    The path for origin ``o`` holds forecasts for ``o+1, ..., o+H``.
    ``windows`` optionally records the estimation window behind each origin
    so that benchmark panels can be audited for look-ahead.
    """

    model: str
    variable: str
    form: str
    entries: Mapping[Quarter, np.ndarray]
    windows: Mapping[Quarter, tuple] = field(default=None)

    def __post_init__(self):
        if self.form not in FORMS:
            raise DataError(f"unknown forecast form {self.form!r}; expected one of {FORMS}")
        entries = {}
        for origin, path in self.entries.items():
            path = _frozen(path).ravel()
            if path.size < 1:
                raise DataError(f"empty forecast path at origin {origin}")
            entries[as_quarter(origin)] = path
        entries = dict(sorted(entries.items()))
        object.__setattr__(self, "entries", MappingProxyType(entries))
        if self.windows is not None:
            windows = {as_quarter(k): (as_quarter(a), as_quarter(b)) for k, (a, b) in self.windows.items()}
            object.__setattr__(self, "windows", MappingProxyType(dict(sorted(windows.items()))))

    @property
    def origins(self) -> list[Quarter]:
        return list(self.entries)

    @property
    def horizon(self) -> int:
        """Longest path length over all origins (0 for an empty panel)."""
        return max((p.size for p in self.entries.values()), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, origin: Quarter, h: int) -> float | None:
        path = self.entries.get(origin)
        if path is None or h < 1 or h > path.size or not np.isfinite(path[h - 1]):
            return None
        return float(path[h - 1])

    def map_paths(self, fn: Callable[[Quarter, np.ndarray], Iterable[float]], form: str,
                  model: str | None = None) -> "ForecastPanel":
        entries = {o: np.asarray(fn(o, p), dtype=float) for o, p in self.entries.items()}
        return ForecastPanel(model or self.model, self.variable, form, entries, self.windows)

    def __repr__(self) -> str:
        span = f"{self.origins[0]}..{self.origins[-1]}" if self.entries else "empty"
        return (
            f"ForecastPanel({self.model!r}, {self.variable!r}, form={self.form}, "
            f"origins={span} ({len(self)}), H={self.horizon})"
        )


def diff_s(series: Series, s: int) -> Series:
    """s-period difference ``x_t - x_{t-s}``; missing where either side is missing."""
    s = int(s)
    if s < 1:
        raise DataError(f"difference order must be >= 1, got {s}")
    n = len(series)
    if s >= n:
        raise DataError(f"difference order {s} >= series length {n}")
    out = np.full(n, np.nan)
    out[s:] = series.values[s:] - series.values[:-s]
    return series.replace(name=f"{series.name}_d{s}", values=out, present=None)


def log_series(series: Series) -> Series:
    """Natural log of a positive-level series."""
    if series.in_logs:
        raise DataError(f"series {series.name!r} is already in logs")
    bad = series.present & ~(series.values > 0)
    if bad.any():
        q = series.start + int(np.flatnonzero(bad)[0])
        raise DataError(f"nonpositive value in {series.name!r} at {q}; cannot take logs")
    with np.errstate(invalid="ignore"):
        values = np.log(series.values)
    return series.replace(values=values, present=series.present, in_logs=True)


def signed_sum(name: str, parts: Iterable[tuple[Series, float]]) -> Series:
    """Signed sum of level series over their common index span."""
    parts = list(parts)
    if not parts:
        raise DataError("signed_sum needs at least one series")
    start = max(p.start for p, _ in parts)
    end = min(p.end for p, _ in parts)
    if end < start:
        raise DataError(f"series in {name!r} do not overlap")
    total = np.zeros(end - start + 1)
    for series, sign in parts:
        total = total + sign * series.window(start, end)
    return Series(name, start, total)
