"""Run configuration read from a TOML file.

Relative file paths resolve against the config file's directory. See the
README for a complete example.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ar import RollingScheme
from .components import PRESETS, Component, ComponentModelSpec
from .exceptions import ConfigError, EncompassError
from .quarter import Quarter
from .regression import COV_METHODS


@dataclass(frozen=True)
class BenchmarkConfig:
    name: str
    kind: str                      # "ar" | "components" | "aggregate_ar"
    series: str | None = None
    use_logs: bool = True
    model: ComponentModelSpec | None = None


@dataclass(frozen=True)
class PanelConfig:
    name: str
    file: str | None = None
    anchor: str | None = None
    annualized: bool = False
    identity: tuple | None = None  # (gdp, consumption, investment) panel names


@dataclass(frozen=True)
class ComparisonConfig:
    label: str
    actual: str
    model_a: str
    model_b: str
    horizons: tuple
    period: tuple | None = None
    cov: str = "truncated_hac"
    annualized: bool | None = None


@dataclass(frozen=True)
class RunConfig:
    base_dir: str
    scheme: RollingScheme | None
    ar_order: int = 4
    series: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    benchmarks: tuple = ()
    panels: tuple = ()
    comparisons: tuple = ()
    simulate: dict = field(default_factory=dict)
    out_dir: str = "out"

    def path(self, rel: str) -> str:
        return rel if os.path.isabs(rel) else os.path.join(self.base_dir, rel)


def _quarter(value, where) -> Quarter:
    try:
        return Quarter.parse(value)
    except EncompassError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return table[key]


def _components(table: dict, where: str) -> ComponentModelSpec:
    names = table.get("names", {})
    if "preset" in table:
        preset = table["preset"]
        if preset not in PRESETS:
            raise ConfigError(f"{where}.preset: unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        spec = PRESETS[preset](names)
        agg = table.get("aggregate", spec.aggregate_name)
        return ComponentModelSpec(table.get("name", spec.name), spec.components, agg)
    comps = []
    for i, c in enumerate(_require(table, "components", where)):
        cw = f"{where}.components[{i}]"
        comps.append(Component(_require(c, "series", cw), int(c.get("sign", 1)), bool(c.get("use_logs", True))))
    return ComponentModelSpec(table.get("name", "custom"), tuple(comps), _require(table, "aggregate", where))


def parse_config(raw: dict, base_dir: str = ".") -> RunConfig:
    try:
        return _parse(raw, base_dir)
    except ConfigError:
        raise
    except EncompassError as exc:
        raise ConfigError(str(exc)) from None
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def _parse(raw: dict, base_dir: str) -> RunConfig:
    scheme = None
    ar_order = 4
    if "scheme" in raw:
        sc = raw["scheme"]
        scheme = RollingScheme(
            _quarter(_require(sc, "estimation_start", "scheme"), "scheme.estimation_start"),
            _quarter(_require(sc, "first_end", "scheme"), "scheme.first_end"),
            _quarter(_require(sc, "last_end", "scheme"), "scheme.last_end"),
            int(sc.get("horizon", 16)),
        )
        ar_order = int(sc.get("ar_order", 4))

    series = dict(raw.get("series", {}))
    derived = {}
    for i, d in enumerate(raw.get("derived", [])):
        where = f"derived[{i}]"
        name = _require(d, "name", where)
        parts = [(str(p[0]), int(p[1])) for p in _require(d, "sum", where)]
        derived[name] = parts

    known_series = set(series) | set(derived)
    benchmarks = []
    for i, b in enumerate(raw.get("benchmark", [])):
        where = f"benchmark[{i}]"
        name = _require(b, "name", where)
        kind = b.get("type", "ar")
        if kind == "ar":
            ser = _require(b, "series", where)
            if ser not in known_series:
                raise ConfigError(f"{where}.series: unknown series {ser!r}")
            benchmarks.append(BenchmarkConfig(name, "ar", ser, bool(b.get("use_logs", True))))
        elif kind in ("components", "aggregate_ar"):
            model = _components(b, where)
            model = ComponentModelSpec(name, model.components, model.aggregate_name)
            for c in model.components:
                if c.name not in known_series:
                    raise ConfigError(f"{where}: component series {c.name!r} not declared in [series]")
            benchmarks.append(BenchmarkConfig(name, kind, None, bool(b.get("use_logs", False)), model))
        else:
            raise ConfigError(f"{where}.type: unknown benchmark type {kind!r}")
    if benchmarks and scheme is None:
        raise ConfigError("benchmarks need a [scheme] section")

    panels = []
    for i, p in enumerate(raw.get("panel", [])):
        where = f"panel[{i}]"
        name = _require(p, "name", where)
        if "identity" in p:
            ident = tuple(p["identity"])
            if len(ident) != 3:
                raise ConfigError(f"{where}.identity: expected [gdp, consumption, investment]")
            panels.append(PanelConfig(name, identity=ident))
        else:
            anchor = p.get("anchor")
            if anchor is not None and anchor not in known_series:
                raise ConfigError(f"{where}.anchor: unknown series {anchor!r}")
            panels.append(PanelConfig(name, _require(p, "file", where), anchor, bool(p.get("annualized", False))))

    sources = {b.name for b in benchmarks} | {p.name for p in panels}
    for p in panels:
        for ref in p.identity or ():
            if ref not in sources:
                raise ConfigError(f"panel {p.name!r}: identity refers to unknown source {ref!r}")

    comparisons = []
    for i, c in enumerate(raw.get("comparison", [])):
        where = f"comparison[{i}]"
        actual = _require(c, "actual", where)
        if actual not in known_series:
            raise ConfigError(f"{where}.actual: unknown series {actual!r}")
        for key in ("model_a", "model_b"):
            if _require(c, key, where) not in sources:
                raise ConfigError(f"{where}.{key}: unknown forecast source {c[key]!r}")
        horizons = tuple(int(h) for h in _require(c, "horizons", where))
        if not horizons or min(horizons) < 1:
            raise ConfigError(f"{where}.horizons: need one or more horizons >= 1")
        period = None
        if "period" in c:
            first, last = (_quarter(q, f"{where}.period") for q in c["period"])
            if last < first:
                raise ConfigError(f"{where}.period: {first} is after {last}")
            period = (first, last)
        cov = c.get("cov", "truncated_hac")
        if cov not in COV_METHODS:
            raise ConfigError(f"{where}.cov: unknown method {cov!r}; choose from {COV_METHODS}")
        comparisons.append(ComparisonConfig(
            c.get("label", actual), actual, c["model_a"], c["model_b"], horizons, period, cov,
            c.get("annualized"),
        ))

    out_dir = raw.get("output", {}).get("dir", "out")
    return RunConfig(base_dir, scheme, ar_order, series, derived, tuple(benchmarks),
                     tuple(panels), tuple(comparisons), dict(raw.get("simulate", {})), out_dir)


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(raw, os.path.dirname(os.path.abspath(path)))
