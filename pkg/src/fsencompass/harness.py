"""Run the forecast, compare and simulate stages from a :class:`RunConfig`."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .ar import ARSpec, rolling_forecasts
from .components import build_aggregate_ar, build_component_forecasts, other_from_identity
from .config import RunConfig
from .csvio import load_forecast_csv, load_series_csv, panel_to_csv
from .exceptions import ConfigError, DataError, EncompassError
from .levels import growth_to_levels, levels_to_log
from .regression import build_design, default_lag, fit_arrays
from .report import (
    RESULT_COLUMNS,
    RMSE_COLUMNS,
    render_rmse,
    render_text,
    result_row,
    rows_to_csv,
)
from .series import ForecastPanel, log_series, signed_sum
from .simulate import DGPSpec, run_monte_carlo

logger = logging.getLogger(__name__)


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def load_data(config: RunConfig) -> dict:
    """Level series by name, including derived signed sums."""
    data = {}
    for name, rel in sorted(config.series.items()):
        try:
            data[name] = load_series_csv(config.path(rel), name=name)
        except FileNotFoundError:
            raise DataError(f"series {name!r}: file not found: {config.path(rel)}") from None
    for name, parts in config.derived.items():
        missing = [p for p, _ in parts if p not in data]
        if missing:
            raise ConfigError(f"derived series {name!r} refers to unknown series {missing}")
        data[name] = signed_sum(name, [(data[p], sign) for p, sign in parts])
    return data


def _forecasts_dir(out_dir: str) -> str:
    return os.path.join(out_dir, "forecasts")


def build_benchmark(bench, data: dict, config: RunConfig, jobs: int | None = None) -> ForecastPanel:
    scheme = config.scheme
    if bench.kind == "ar":
        return rolling_forecasts(data[bench.series], ARSpec(config.ar_order, bench.use_logs),
                                 scheme, model=bench.name, n_jobs=jobs)
    if bench.kind == "components":
        return build_component_forecasts(bench.model, data, scheme, p=config.ar_order, n_jobs=jobs).panel
    return build_aggregate_ar(bench.model, data, scheme, p=config.ar_order, use_logs=bench.use_logs)


def audit_windows(panel: ForecastPanel, estimation_start) -> None:
    """Every benchmark origin must be estimated on data ending at the origin."""
    if panel.windows is None:
        raise EncompassError(f"{panel.model}: no estimation windows recorded")
    for origin, (start, end) in panel.windows.items():
        if end != origin or start != estimation_start:
            raise EncompassError(
                f"{panel.model}: origin {origin} estimated on {start}..{end}; look-ahead not allowed"
            )


def cmd_forecast(config: RunConfig, out_dir: str | None = None, jobs: int | None = None) -> list[str]:
    """Write one forecast CSV per benchmark plus a window manifest."""
    out_dir = out_dir or config.path(config.out_dir)
    data = load_data(config)
    written = []
    manifest = {}
    for bench in config.benchmarks:
        try:
            panel = build_benchmark(bench, data, config, jobs)
        except EncompassError as exc:
            raise type(exc)(f"benchmark {bench.name!r}: {exc}") from exc
        audit_windows(panel, config.scheme.estimation_start)
        path = os.path.join(_forecasts_dir(out_dir), f"{bench.name}.csv")
        _write(path, panel_to_csv(panel))
        written.append(path)
        manifest[bench.name] = {
            "variable": panel.variable,
            "form": panel.form,
            "origins": len(panel),
            "horizon": panel.horizon,
            "windows": {str(o): [str(a), str(b)] for o, (a, b) in panel.windows.items()},
        }
        logger.info("wrote %s (%d origins)", path, len(panel))
    mpath = os.path.join(_forecasts_dir(out_dir), "manifest.json")
    _write(mpath, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(mpath)
    return written


class _Sources:
    """Resolves forecast source names to panels, converting growth paths
    to levels with the configured anchor series."""

    def __init__(self, config: RunConfig, data: dict, out_dir: str):
        self.config = config
        self.data = data
        self.out_dir = out_dir
        self.benchmarks = {b.name for b in config.benchmarks}
        self.panels = {p.name: p for p in config.panels}
        self._cache = {}

    def native(self, name: str, annualized: bool | None = None) -> ForecastPanel:
        key = (name, annualized)
        if key not in self._cache:
            self._cache[key] = self._load(name, annualized)
        return self._cache[key]

    def _load(self, name, annualized):
        if name in self.benchmarks:
            path = os.path.join(_forecasts_dir(self.out_dir), f"{name}.csv")
            if not os.path.exists(path):
                raise DataError(f"benchmark {name!r} not found at {path}; run 'forecast' first")
            return load_forecast_csv(path)
        pc = self.panels[name]
        if pc.identity:
            g, c, i = (self.level(n, annualized) for n in pc.identity)
            return other_from_identity(g, c, i, model=name)
        path = self.config.path(pc.file)
        if not os.path.exists(path):
            raise DataError(f"panel {name!r}: file not found: {path}")
        panel = load_forecast_csv(path)
        panel = ForecastPanel(name, panel.variable, panel.form, panel.entries)
        if panel.form == "growth_pct":
            if pc.anchor is None:
                raise ConfigError(f"panel {name!r} holds growth rates but has no anchor series")
            ann = pc.annualized if annualized is None else annualized
            panel = growth_to_levels(panel, self.data[pc.anchor], ann)
        return panel

    def level(self, name, annualized=None) -> ForecastPanel:
        panel = self.native(name, annualized)
        if panel.form == "log_level":
            return panel.map_paths(lambda o, p: np.exp(p), form="level")
        return panel

    def log(self, name, annualized=None) -> ForecastPanel:
        panel = self.native(name, annualized)
        return panel if panel.form == "log_level" else levels_to_log(panel)


def _fmt_range(first, last) -> str:
    return f"{first}-{last}" if first is not None else ""


def run_comparison(comp, sources: _Sources, data: dict):
    actual = log_series(data[comp.actual])
    fa = sources.log(comp.model_a, comp.annualized)
    fb = sources.log(comp.model_b, comp.annualized)
    results, rmse_rows, ranges, notes = [], [], {}, []
    for s in comp.horizons:
        try:
            data_s = build_design(actual, fa, fb, s, comp.period)
            res = fit_arrays(data_s.y, data_s.xa, data_s.xb, cov=comp.cov,
                             L=default_lag(comp.cov, s), s=s, dropped=data_s.dropped,
                             targets=data_s.targets)
        except EncompassError as exc:
            raise type(exc)(f"comparison {comp.label!r} s={s}: {exc}") from exc
        results.append(result_row(comp.label, res))
        ranges[str(s)] = _fmt_range(res.first_target, res.last_target)
        notes.extend(f"s={s}: {w}" for w in res.warnings)
        # RMSE over the regression's common target set
        for x, model in ((data_s.xa, comp.model_a), (data_s.xb, comp.model_b)):
            err = x - data_s.y
            rmse_rows.append({"variable": comp.label, "s": s, "model": model,
                              "rmse": float(np.sqrt(np.mean(err**2))), "nobs": int(err.size)})
    meta = {"model_a": comp.model_a, "model_b": comp.model_b, "actual": comp.actual,
            "title": f"{comp.label}: {comp.model_a} vs {comp.model_b}", "ranges": ranges,
            "warnings": notes}
    return results, rmse_rows, meta


def cmd_compare(config: RunConfig, out_dir: str | None = None, jobs: int | None = None) -> list[str]:
    """Estimate every configured comparison and write results.csv,
    rmse.csv, results.txt and results_meta.json."""
    out_dir = out_dir or config.path(config.out_dir)
    data = load_data(config)
    sources = _Sources(config, data, out_dir)
    # resolve panels up front so the cache is filled before any threads run
    for comp in config.comparisons:
        sources.log(comp.model_a, comp.annualized)
        sources.log(comp.model_b, comp.annualized)
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(lambda c: run_comparison(c, sources, data), config.comparisons))
    else:
        outputs = [run_comparison(c, sources, data) for c in config.comparisons]

    rows, rmse_rows, meta = [], [], {}
    for comp, (res, rm, info) in zip(config.comparisons, outputs):
        rows.extend(res)
        rmse_rows.extend(rm)
        meta[comp.label] = info
    text = render_text(rows, meta)
    if rmse_rows:
        text += "\n" + render_rmse(rmse_rows)
    paths = {
        "results.csv": rows_to_csv(rows, RESULT_COLUMNS),
        "rmse.csv": rows_to_csv(rmse_rows, RMSE_COLUMNS),
        "results.txt": text,
        "results_meta.json": json.dumps(meta, indent=2, sort_keys=True) + "\n",
    }
    written = []
    for fname, content in paths.items():
        path = os.path.join(out_dir, fname)
        _write(path, content)
        written.append(path)
    return written


def cmd_simulate(params: dict, reps: int, seed: int, out_dir: str, jobs: int | None = None,
                 cov: str = "truncated_hac", L: int | None = None) -> str:
    """Monte Carlo summary written to ``simulate.csv`` (one row)."""
    try:
        spec = DGPSpec(**params)
    except TypeError as exc:
        raise ConfigError(f"invalid DGP parameters: {exc}") from None
    summary = run_monte_carlo(spec, reps, seed, cov=cov, L=L, n_jobs=jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(summary))
    writer.writerow([repr(v) if isinstance(v, float) else v for v in summary.values()])
    path = os.path.join(out_dir, "simulate.csv")
    _write(path, buf.getvalue())
    return path
