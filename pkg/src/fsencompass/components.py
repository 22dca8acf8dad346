"""Aggregate benchmark forecasters built from per-component AR equations.

GDP is forecast as the signed sum of ten component forecasts (the GDP
identity); consumption, fixed investment and the remaining block reuse the
relevant subsets. Inventory investment and the statistical discrepancy can
be negative, so their equations are estimated in levels.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .ar import ARSpec, RollingScheme, rolling_forecasts
from .exceptions import DataError, EncompassError
from .series import ForecastPanel, Series, signed_sum


@dataclass(frozen=True)
class Component:
    name: str
    sign: int = 1
    use_logs: bool = True


@dataclass(frozen=True)
class ComponentModelSpec:
    name: str
    components: tuple
    aggregate_name: str

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(*c) for c in self.components)
        if not comps:
            raise DataError(f"{self.name}: a component model needs at least one component")
        names = [c.name for c in comps]
        if len(set(names)) != len(names):
            raise DataError(f"{self.name}: duplicate component names {names}")
        for c in comps:
            if c.sign not in (1, -1):
                raise DataError(f"{self.name}: sign of {c.name!r} must be +1 or -1, got {c.sign}")
        object.__setattr__(self, "components", comps)

    def subset(self, name: str, keep, aggregate_name: str) -> "ComponentModelSpec":
        keep = list(keep)
        comps = {c.name: c for c in self.components}
        return ComponentModelSpec(name, tuple(comps[k] for k in keep), aggregate_name)


# canonical series keys for the ten real-GDP components
GDP_COMPONENTS = (
    Component("cs", 1, True),    # consumption of services
    Component("cn", 1, True),    # consumption of nondurables
    Component("cd", 1, True),    # consumption of durables
    Component("ires", 1, True),  # residential investment
    Component("inr", 1, True),   # fixed nonresidential investment
    Component("iv", 1, False),   # inventory investment
    Component("ex", 1, True),    # exports
    Component("im", -1, True),   # imports
    Component("g", 1, True),     # government, federal plus state and local
    Component("sd", 1, False),   # statistical discrepancy from chain linking
)


def ysar4(names: Mapping[str, str] | None = None) -> ComponentModelSpec:
    """The ten-component GDP model. ``names`` renames canonical keys to the
    series names used in the data."""
    names = names or {}
    comps = tuple(Component(names.get(c.name, c.name), c.sign, c.use_logs) for c in GDP_COMPONENTS)
    return ComponentModelSpec("YSAR4", comps, names.get("gdp", "gdp"))


def _subset(model: str, keys, aggregate: str, names) -> ComponentModelSpec:
    names = names or {}
    full = ysar4(names)
    return full.subset(model, [names.get(k, k) for k in keys], names.get(aggregate, aggregate))


def csar4(names=None) -> ComponentModelSpec:
    return _subset("CSAR4", ("cs", "cn", "cd"), "cons", names)


def isar4(names=None) -> ComponentModelSpec:
    return _subset("ISAR4", ("ires", "inr"), "inv", names)


def osar4(names=None) -> ComponentModelSpec:
    return _subset("OSAR4", ("iv", "ex", "im", "g", "sd"), "other", names)


PRESETS = {"YSAR4": ysar4, "CSAR4": csar4, "ISAR4": isar4, "OSAR4": osar4}


@dataclass(frozen=True, eq=False)
class AggregateForecast:
    panel: ForecastPanel
    component_panels: Mapping[str, ForecastPanel]


def _component_levels(comp: Component, series: Series, scheme: RollingScheme, p: int) -> ForecastPanel:
    try:
        panel = rolling_forecasts(series, ARSpec(p=p, use_logs=comp.use_logs), scheme, model=comp.name)
    except EncompassError as exc:
        raise type(exc)(f"component {comp.name!r}: {exc}") from exc
    if comp.use_logs:
        panel = panel.map_paths(lambda o, path: np.exp(path), form="level")
    return panel


def build_component_forecasts(spec: ComponentModelSpec, data: Mapping[str, Series],
                              scheme: RollingScheme, p: int = 4,
                              n_jobs: int | None = None) -> AggregateForecast:
    """Forecast each component in its own space, convert to levels, and sum
    with signs at every (origin, horizon)."""
    missing = [c.name for c in spec.components if c.name not in data]
    if missing:
        raise DataError(f"{spec.name}: missing component series {missing}")
    jobs = [(c, data[c.name]) for c in spec.components]
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            panels = list(pool.map(lambda cs: _component_levels(cs[0], cs[1], scheme, p), jobs))
    else:
        panels = [_component_levels(c, s, scheme, p) for c, s in jobs]

    origins = panels[0].origins
    entries = {}
    for o in origins:
        total = np.zeros(scheme.horizon)
        for comp, panel in zip(spec.components, panels):
            total = total + comp.sign * panel.entries[o]
        entries[o] = total
    aggregate = ForecastPanel(spec.name, spec.aggregate_name, "level", entries, panels[0].windows)
    return AggregateForecast(aggregate, {c.name: pnl for c, pnl in zip(spec.components, panels)})


def aggregate_actuals(spec: ComponentModelSpec, data: Mapping[str, Series]) -> Series:
    """Signed sum of the component actuals (the identity applied to history)."""
    return signed_sum(spec.aggregate_name, [(data[c.name], c.sign) for c in spec.components])


def build_aggregate_ar(spec: ComponentModelSpec, data: Mapping[str, Series],
                       scheme: RollingScheme, p: int = 4, use_logs: bool = False) -> ForecastPanel:
    """Single-equation alternative: one AR(p) on the summed aggregate."""
    total = aggregate_actuals(spec, data)
    panel = rolling_forecasts(total, ARSpec(p=p, use_logs=use_logs), scheme, model=spec.name)
    if use_logs:
        panel = panel.map_paths(lambda o, path: np.exp(path), form="level")
    return panel


def other_from_identity(gdp: ForecastPanel, consumption: ForecastPanel,
                        investment: ForecastPanel, model: str | None = None) -> ForecastPanel:
    """OTHER = GDP - consumption - investment, entry by entry."""
    for panel in (gdp, consumption, investment):
        if panel.form != "level":
            raise DataError(f"panel {panel.model}/{panel.variable} must be in level form, got {panel.form}")
    if not (gdp.origins == consumption.origins == investment.origins):
        raise DataError("origin sets differ between GDP, consumption and investment panels")
    entries = {}
    for o in gdp.origins:
        g, c, i = gdp.entries[o], consumption.entries[o], investment.entries[o]
        if not (g.size == c.size == i.size):
            raise DataError(f"horizon mismatch at origin {o}: {g.size}, {c.size}, {i.size}")
        entries[o] = g - c - i
    return ForecastPanel(model or gdp.model, "other", "level", entries, gdp.windows)
