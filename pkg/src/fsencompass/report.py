"""Results tables: machine CSV and a fixed-width text layout.

The text table mirrors the printed layout of encompassing-regression
tables: coefficients on one line, t-statistics in parentheses beneath.
Coefficients and R^2 use 3 decimals, SE 4, t-statistics 2.
"""
from __future__ import annotations

import csv
import io
import math
from itertools import groupby

RESULT_COLUMNS = ["variable", "s", "alpha", "beta", "gamma", "t_alpha", "t_beta", "t_gamma",
                  "se", "r2", "nobs", "cov_method", "L", "dropped"]
RMSE_COLUMNS = ["variable", "s", "model", "rmse", "nobs"]


def result_row(label: str, res) -> dict:
    t = res.tstats
    return {
        "variable": label, "s": res.s, "alpha": res.alpha, "beta": res.beta, "gamma": res.gamma,
        "t_alpha": t[0], "t_beta": t[1], "t_gamma": t[2], "se": res.se_regression, "r2": res.r2,
        "nobs": res.nobs, "cov_method": res.cov_method, "L": res.L, "dropped": res.dropped,
    }


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows, columns=RESULT_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    ints = ("s", "nobs", "L", "dropped")
    strs = ("variable", "cov_method")
    out = []
    for r in rows:
        out.append({k: (v if k in strs else int(v) if k in ints else float(v)) for k, v in r.items()})
    return out


def _num(value: float, digits: int) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    text = f"{value:.{digits}f}"
    # avoid printing -0.000
    return text[1:] if text.startswith("-") and float(text) == 0.0 else text


def _t(value: float) -> str:
    return f"({_num(value, 2)})"


def render_text(rows, meta=None) -> str:
    """Fixed-width table grouped by ``variable``.

    ``meta`` maps variable label to a dict with optional ``model_a``,
    ``model_b``, ``title`` and per-s ``ranges`` entries.
    """
    meta = meta or {}
    lines = []
    if not rows:
        w = 9
        lines.append(f"{'s':>3}{'cnst':>{w}}{'A':>{w}}{'B':>{w}}{'SE':>{w}}{'R2':>{w}}{'# obs.':>{w}}")
        return "\n".join(lines) + "\n"
    for label, group in groupby(rows, key=lambda r: r["variable"]):
        group = list(group)
        info = meta.get(label, {})
        a = str(info.get("model_a", "A"))
        b = str(info.get("model_b", "B"))
        w = max(9, len(a) + 1, len(b) + 1)
        title = info.get("title", label)
        if lines:
            lines.append("")
        lines.append(f"{title} (cov={group[0]['cov_method']})")
        lines.append(f"{'s':>3}{'cnst':>{w}}{a:>{w}}{b:>{w}}{'SE':>{w}}{'R2':>{w}}{'# obs.':>{w}}  range")
        for r in group:
            rng = info.get("ranges", {}).get(str(r["s"]), "")
            lines.append(
                f"{r['s']:>3}{_num(r['alpha'], 3):>{w}}{_num(r['beta'], 3):>{w}}{_num(r['gamma'], 3):>{w}}"
                f"{_num(r['se'], 4):>{w}}{_num(r['r2'], 3):>{w}}{r['nobs']:>{w}}  {rng}".rstrip()
            )
            lines.append(f"{'':>3}{_t(r['t_alpha']):>{w}}{_t(r['t_beta']):>{w}}{_t(r['t_gamma']):>{w}}")
    return "\n".join(lines) + "\n"


def render_rmse(rows) -> str:
    vw = max([len("variable")] + [len(r["variable"]) for r in rows]) + 2
    mw = max([len("model")] + [len(r["model"]) for r in rows]) + 2
    lines = ["RMSE (common target set)",
             f"{'variable':<{vw}}{'s':>3}  {'model':<{mw}}{'rmse':>10}{'# obs.':>8}"]
    for r in rows:
        lines.append(f"{r['variable']:<{vw}}{r['s']:>3}  {r['model']:<{mw}}"
                     f"{_num(r['rmse'], 4):>10}{r['nobs']:>8}")
    return "\n".join(lines) + "\n"
