"""Least squares through the SVD with an explicit rank check."""
from __future__ import annotations

import numpy as np

from .exceptions import CollinearityError

#: smallest/largest singular value ratio below which a design is singular
RANK_TOL = 1e-12


def svd_lstsq(X: np.ndarray, y: np.ndarray, names=None, tol: float = RANK_TOL):
    """Solve ``min ||y - X b||`` and return ``(b, singular_values)``.

    Raises :class:`CollinearityError` naming the two columns that load most
    heavily on the null direction when the design is rank deficient.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    U, sv, Vt = np.linalg.svd(X, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0 or sv[-1] / sv[0] < tol:
        pair = null_pair(Vt[-1], names)
        raise CollinearityError(
            f"design matrix is rank deficient (singular value ratio "
            f"{(sv[-1] / sv[0]) if sv[0] else 0.0:.3g} < {tol:g}); collinear columns: {pair[0]}, {pair[1]}",
            pair=pair,
        )
    b = Vt.T @ ((U.T @ y) / sv)
    return b, sv


def null_pair(v: np.ndarray, names=None) -> tuple:
    names = list(names) if names is not None else [f"x{i}" for i in range(v.size)]
    order = np.argsort(-np.abs(v), kind="stable")[:2]
    i, j = sorted(int(k) for k in order)
    return names[i], names[j]
