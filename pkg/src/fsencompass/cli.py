"""Command line entry point: ``fsencompass {forecast,compare,simulate,table}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .config import load_config
from .exceptions import DataError, EncompassError
from .harness import cmd_compare, cmd_forecast, cmd_simulate
from .report import read_results_csv, render_text
from .simulate import DGPS

logger = logging.getLogger("fsencompass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsencompass", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="TOML run configuration")
        p.add_argument("--out", help="output directory (overrides [output] dir)")
        p.add_argument("--jobs", type=int, default=1, help="worker threads")

    common(sub.add_parser("forecast", help="build lagged-value benchmark forecast panels"))
    common(sub.add_parser("compare", help="estimate encompassing regressions and write tables"))

    sim = sub.add_parser("simulate", help="Monte Carlo check of the regression")
    common(sim, config_required=False)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--dgp", choices=DGPS, default=None)
    sim.add_argument("--n", type=int, default=None)
    sim.add_argument("--s", type=int, default=None)
    sim.add_argument("--cov", default=None)
    sim.add_argument("--lags", type=int, default=None, help="HAC lag (default s-1)")

    tab = sub.add_parser("table", help="render results.csv as a text table")
    tab.add_argument("results", help="results.csv from 'compare'")
    tab.add_argument("--meta", help="results_meta.json (defaults to the file beside results.csv)")
    tab.add_argument("--out", help="write the table here instead of stdout")
    return parser


def _simulate(args) -> str:
    params, reps, seed, cov, lags = {}, 1000, 0, "truncated_hac", None
    out = args.out
    if args.config:
        cfg = load_config(args.config)
        sim = dict(cfg.simulate)
        reps = int(sim.pop("reps", reps))
        seed = int(sim.pop("seed", seed))
        cov = sim.pop("cov", cov)
        lags = sim.pop("lags", lags)
        if "dgp" in sim:
            sim["kind"] = sim.pop("dgp")
        params.update(sim)
        out = out or cfg.path(cfg.out_dir)
    for key, attr in (("kind", "dgp"), ("n", "n"), ("s", "s")):
        if getattr(args, attr) is not None:
            params[key] = getattr(args, attr)
    reps = args.reps if args.reps is not None else reps
    seed = args.seed if args.seed is not None else seed
    cov = args.cov or cov
    lags = args.lags if args.lags is not None else lags
    return cmd_simulate(params, reps, seed, out or "out", jobs=args.jobs, cov=cov, L=lags)


def _table(args) -> str:
    rows = read_results_csv(args.results)
    meta_path = args.meta or os.path.join(os.path.dirname(os.path.abspath(args.results)), "results_meta.json")
    meta = {}
    if os.path.exists(meta_path):
        with open(meta_path) as fh:
            meta = json.load(fh)
    text = render_text(rows, meta)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "forecast":
            cfg = load_config(args.config)
            for path in cmd_forecast(cfg, args.out, args.jobs):
                print(path)
        elif args.command == "compare":
            cfg = load_config(args.config)
            for path in cmd_compare(cfg, args.out, args.jobs):
                print(path)
        elif args.command == "simulate":
            print(_simulate(args))
        else:
            _table(args)
    except EncompassError as exc:
        kind = type(exc).__name__
        print(f"error ({kind}): {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error (DataError): {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
