"""Regenerate the end-to-end fixture data (not run by the test suite).

    python -m tests.fixtures.make_e2e_fixture

The committed golden outputs must be refreshed by hand afterwards with
``fsencompass forecast`` and ``fsencompass compare``.
"""
import os

import numpy as np

from fsencompass import ForecastPanel, Quarter
from fsencompass.csvio import write_forecast_csv, write_series_csv

from ..synth import deflator, economy

HERE = os.path.join(os.path.dirname(__file__), "e2e")
WOLTERS_ABSENT = ("1987Q2", "1990Q1", "1993Q3", "1996Q4", "1999Q2")


def growth_panel(series, model, origins, H, rng, weight=0.6):
    g = 100 * np.diff(np.log(series.values))
    mean = g.mean()
    entries = {}
    for o in origins:
        path = []
        for h in range(1, H + 1):
            idx = (o + h) - series.start - 1  # growth into quarter o+h
            actual = g[idx] if idx < g.size else mean
            path.append(round(weight * actual + (1 - weight) * mean + 0.4 * g.std() * rng.standard_normal(), 6))
        entries[o] = path
    return ForecastPanel(model, series.name, "growth_pct", entries)


def main():
    rng = np.random.default_rng(2018)
    data = economy(seed=7)
    data["pgdp"] = deflator(seed=11)
    os.makedirs(os.path.join(HERE, "data"), exist_ok=True)
    os.makedirs(os.path.join(HERE, "panels"), exist_ok=True)
    for name, s in data.items():
        rounded = s.replace(values=np.round(s.values, 6))
        write_series_csv(rounded, os.path.join(HERE, "data", f"{name}.csv"))

    origins = [Quarter(1992, 1) + i for i in range(97)]
    for var in ("gdp", "cons", "inv", "pgdp"):
        panel = growth_panel(data[var], "DSGE", origins, 12, rng)
        write_forecast_csv(panel, os.path.join(HERE, "panels", f"dsge_{var}.csv"))

    absent = {Quarter.parse(q) for q in WOLTERS_ABSENT}
    w_origins = [Quarter(1984, 1) + i for i in range(75) if Quarter(1984, 1) + i not in absent]
    panel = growth_panel(data["gdp"], "WOLTERS", w_origins, 9, rng, weight=0.4)
    write_forecast_csv(panel, os.path.join(HERE, "panels", "wolters_gdp.csv"))


if __name__ == "__main__":
    main()
