"""Monte Carlo checks of what the encompassing regression identifies.

The realized s-period change is ``s*mu + wa*z1 + wb*z2 + u`` with ``u``
an MA(s-1) sum of quarterly shocks. The information structures differ in
what each forecaster observes:

``encompassing``  a sees both signals, b sees a noisy copy of z1 only
``independent``   a sees z1, b sees z2 (coefficients recover wa, wb)
``negative``      as ``independent`` with wb < 0 by default
``none``          both forecasts are pure noise
``null``          a sees z1, b is noise (gamma = 0 holds)
``duplicate``     b is an exact copy of a (never identified)

Replication ``r`` draws from its own child of ``SeedSequence(seed)``, so
results do not depend on how replications are scheduled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DataError, IdentificationError
from .regression import COV_METHODS, default_lag, fit_arrays

DGPS = ("encompassing", "independent", "negative", "none", "null", "duplicate")


@dataclass(frozen=True)
class DGPSpec:
    kind: str = "encompassing"
    n: int = 200
    s: int = 1
    drift: float = 0.5
    weight_a: float = 0.5
    weight_b: float | None = None
    signal_sd: float = 1.0
    noise_sd: float = 1.0
    forecast_noise_sd: float = 0.5
    persistent_signals: bool = False

    def __post_init__(self):
        if self.kind not in DGPS:
            raise DataError(f"unknown DGP {self.kind!r}; expected one of {DGPS}")
        if self.n < 5:
            raise DataError(f"n must be >= 5, got {self.n}")
        if self.s < 1:
            raise DataError(f"s must be >= 1, got {self.s}")
        if min(self.signal_sd, self.noise_sd, self.forecast_noise_sd) < 0:
            raise DataError("standard deviations must be nonnegative")

    @property
    def wb(self) -> float:
        if self.weight_b is not None:
            return self.weight_b
        return -0.5 if self.kind == "negative" else 0.5


def _overlap(x: np.ndarray, s: int) -> np.ndarray:
    # sums of s consecutive quarters: rows are the s-period windows
    c = np.concatenate(([0.0], np.cumsum(x)))
    return c[s:] - c[:-s]


def draw(spec: DGPSpec, rng: np.random.Generator):
    """One sample of (y, xa, xb) as s-period changes.

    Signals are dated at the forecast origin: one draw per target with
    variance ``s * signal_sd**2``. The unforecastable part of the change
    sums s quarterly shocks, which makes the regression error MA(s-1).
    With ``persistent_signals`` the signals are overlapping sums as well,
    so the forecast changes inherit the MA(s-1) structure.
    """
    n, s = spec.n, spec.s
    m = n + s - 1
    if spec.persistent_signals:
        def signal(sd):
            return _overlap(rng.standard_normal(m) * sd, s)
    else:
        def signal(sd):
            return rng.standard_normal(n) * sd * np.sqrt(s)
    z1 = signal(spec.signal_sd)
    z2 = signal(spec.signal_sd)
    eta_a = signal(spec.forecast_noise_sd)
    eta_b = signal(spec.forecast_noise_sd)
    u = _overlap(rng.standard_normal(m) * spec.noise_sd, s)
    wa, wb = spec.weight_a, spec.wb
    kind = spec.kind
    base = s * spec.drift

    if kind == "null":
        info = wa * z1
    elif kind == "none":
        info = 0.0
    else:
        info = wa * z1 + wb * z2
    y = base + info + u

    if kind == "encompassing":
        xa = base + wa * z1 + wb * z2
        xb = base + wa * z1 + eta_b
    elif kind in ("independent", "negative", "null", "duplicate"):
        xa = base + z1
        xb = base + (z2 if kind != "null" else eta_b)
        if kind == "duplicate":
            xb = xa.copy()
    else:  # none
        xa = eta_a.copy()
        xb = eta_b.copy()
    return y, xa, xb


def _replicate(spec: DGPSpec, seed_seq, cov: str, L: int):
    rng = np.random.default_rng(seed_seq)
    y, xa, xb = draw(spec, rng)
    try:
        res = fit_arrays(y, xa, xb, cov=cov, L=L, s=spec.s)
    except IdentificationError:
        return None, float(y.mean())
    return res, float(y.mean())


def run_monte_carlo(spec: DGPSpec, reps: int, seed: int, cov: str = "truncated_hac",
                    L: int | None = None, crit: float = 1.96, n_jobs: int | None = None) -> dict:
    """Replicate the regression ``reps`` times and summarize."""
    if reps < 1:
        raise DataError(f"reps must be >= 1, got {reps}")
    if cov not in COV_METHODS:
        raise DataError(f"unknown covariance method {cov!r}")
    lag = default_lag(cov, spec.s) if L is None else int(L)
    children = np.random.SeedSequence(int(seed)).spawn(int(reps))
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            out = list(pool.map(lambda ss: _replicate(spec, ss, cov, lag), children))
    else:
        out = [_replicate(spec, ss, cov, lag) for ss in children]

    fitted = [r for r, _ in out if r is not None]
    summary = {"dgp": spec.kind, "reps": int(reps), "seed": int(seed), "n": spec.n, "s": spec.s,
               "cov_method": cov, "L": lag if cov not in ("white", "plain_ols") else 0,
               "identification_errors": len(out) - len(fitted),
               "mean_change": float(np.mean([m for _, m in out]))}
    if fitted:
        coefs = np.array([r.coef for r in fitted])
        tstats = np.array([r.tstats for r in fitted])
        for i, name in enumerate(("alpha", "beta", "gamma")):
            summary[f"mean_{name}"] = float(coefs[:, i].mean())
            summary[f"sd_{name}"] = float(coefs[:, i].std(ddof=1)) if len(fitted) > 1 else 0.0
            summary[f"reject_{name}"] = float(np.mean(np.abs(tstats[:, i]) > crit))
        summary["mean_r2"] = float(np.mean([r.r2 for r in fitted]))
    else:
        for name in ("alpha", "beta", "gamma"):
            summary[f"mean_{name}"] = summary[f"sd_{name}"] = summary[f"reject_{name}"] = float("nan")
        summary["mean_r2"] = float("nan")
    summary.update({f"dgp_{k}": v for k, v in asdict(spec).items() if k not in ("kind", "n", "s")})
    return summary
