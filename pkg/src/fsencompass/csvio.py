"""CSV ingestion and emission for series and forecast panels.

Series files::

    date,value
    1954Q1,2.5371

Forecast files carry a form directive ahead of the header::

    # form=growth_pct
    model,variable,origin,horizon,value
    NYFRB,gdp,1992Q1,1,0.61

Values are written with ``repr`` so a load/emit/load cycle is exact.
"""
from __future__ import annotations

import csv
import io
import math
import os
from collections import defaultdict

import numpy as np

from .exceptions import DataError
from .quarter import Quarter
from .series import FORMS, ForecastPanel, Series

SERIES_HEADER = ["date", "value"]
FORECAST_HEADER = ["model", "variable", "origin", "horizon", "value"]


def _read_lines(path) -> tuple[dict, list[str]]:
    directives = {}
    body = []
    with open(path, newline="") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                for token in stripped.lstrip("#").split():
                    if "=" in token:
                        key, _, value = token.partition("=")
                        directives[key.strip()] = value.strip()
                continue
            body.append(line)
    return directives, body


def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise DataError(f"{where}: non-numeric value {text!r}") from None
    if math.isnan(value) or math.isinf(value):
        raise DataError(f"{where}: non-finite value {text!r}")
    return value


def _fmt(value: float) -> str:
    return repr(float(value))


def load_series_csv(path, name: str | None = None, unit: str = "") -> Series:
    """Read a ``date,value`` file. Quarters skipped between the first and
    last date become explicit missing entries."""
    name = name or os.path.splitext(os.path.basename(str(path)))[0]
    directives, body = _read_lines(path)
    rows = list(csv.reader(body))
    if rows and [c.strip().lower() for c in rows[0]] == SERIES_HEADER:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: empty series file")
    data: dict[Quarter, float] = {}
    last = None
    for lineno, row in enumerate(rows, start=2):
        where = f"{path}:{lineno}"
        if len(row) != 2:
            raise DataError(f"{where}: expected 2 fields, got {len(row)}")
        q = _parse_quarter(row[0], where)
        if q in data:
            raise DataError(f"{where}: duplicate quarter {q}")
        if last is not None and q < last:
            raise DataError(f"{where}: dates not increasing ({q} after {last})")
        data[q] = _parse_float(row[1].strip(), where)
        last = q
    in_logs = directives.get("in_logs", "false").lower() in ("1", "true", "yes")
    return Series.from_mapping(name, data, unit=directives.get("unit", unit), in_logs=in_logs)


def _parse_quarter(text: str, where: str) -> Quarter:
    try:
        return Quarter.parse(text)
    except DataError as exc:
        raise DataError(f"{where}: {exc}") from None


def series_to_csv(series: Series) -> str:
    buf = io.StringIO()
    if series.in_logs:
        buf.write("# in_logs=true\n")
    buf.write(",".join(SERIES_HEADER) + "\n")
    for q, v, ok in zip(series.quarters, series.values, series.present):
        if ok:
            buf.write(f"{q},{_fmt(v)}\n")
    return buf.getvalue()


def write_series_csv(series: Series, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(series_to_csv(series))


def load_forecast_csv(path) -> ForecastPanel:
    """Read a forecast panel. Horizons for each origin must run 1..H."""
    directives, body = _read_lines(path)
    form = directives.get("form")
    if form is None:
        raise DataError(f"{path}: missing '# form=...' directive")
    if form not in FORMS:
        raise DataError(f"{path}: unknown form {form!r}")
    rows = list(csv.reader(body))
    if rows and [c.strip().lower() for c in rows[0]] == FORECAST_HEADER:
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: empty forecast file")

    models, variables = set(), set()
    cells: dict[Quarter, dict[int, float]] = defaultdict(dict)
    for lineno, row in enumerate(rows, start=3):
        where = f"{path}:{lineno}"
        if len(row) != 5:
            raise DataError(f"{where}: expected 5 fields, got {len(row)}")
        model, variable, origin, horizon, value = (c.strip() for c in row)
        models.add(model)
        variables.add(variable)
        q = _parse_quarter(origin, where)
        try:
            h = int(horizon)
        except ValueError:
            raise DataError(f"{where}: horizon {horizon!r} is not an integer") from None
        if h < 1:
            raise DataError(f"{where}: horizon must be >= 1, got {h}")
        if h in cells[q]:
            raise DataError(f"{where}: duplicate key origin={q} horizon={h}")
        cells[q][h] = _parse_float(value, where)
    if len(models) > 1 or len(variables) > 1:
        raise DataError(
            f"{path}: mixed models/variables in one file: {sorted(models)} / {sorted(variables)}"
        )

    entries = {}
    for q, by_h in cells.items():
        H = max(by_h)
        if sorted(by_h) != list(range(1, H + 1)):
            missing = sorted(set(range(1, H + 1)) - set(by_h))
            raise DataError(f"{path}: horizon gap at origin {q}; missing {missing}")
        entries[q] = np.array([by_h[h] for h in range(1, H + 1)])
    return ForecastPanel(models.pop(), variables.pop(), form, entries)


def panel_to_csv(panel: ForecastPanel) -> str:
    buf = io.StringIO()
    buf.write(f"# form={panel.form}\n")
    buf.write(",".join(FORECAST_HEADER) + "\n")
    for origin, path in panel.entries.items():
        for h, v in enumerate(path, start=1):
            buf.write(f"{panel.model},{panel.variable},{origin},{h},{_fmt(v)}\n")
    return buf.getvalue()


def write_forecast_csv(panel: ForecastPanel, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(panel_to_csv(panel))
