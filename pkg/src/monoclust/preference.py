"""Preference-based geometry for monotonic clustering.

All features are taken as maximisation-oriented (higher is better).
"""

import numpy as np


def _check(*vs):
    vs = [np.asarray(v, dtype=float) for v in vs]
    shape = vs[0].shape
    if any(v.shape != shape for v in vs) or vs[0].ndim != 1:
        raise ValueError(f"length mismatch: {[v.shape for v in vs]}")
    return vs


def preference(x, y, w) -> float:
    """Weighted advantage of ``x`` over ``y``.

    Sums ``w_d * (x_d - y_d)`` over the dimensions where ``x_d > y_d``
    strictly; ties contribute nothing.
    """
    x, y, w = _check(x, y, w)
    gt = x > y
    return float(np.sum(w[gt] * (x[gt] - y[gt])))


def weighted_l1(x, y, w) -> float:
    x, y, w = _check(x, y, w)
    return float(np.sum(w * np.abs(x - y)))


def mono_distance(x, y, w) -> float:
    """``|preference(x, y) - preference(y, x)|``.

    Algebraically this equals ``|s(x) - s(y)|`` with ``s = projection``;
    the clustering code uses that form directly.
    """
    return abs(preference(x, y, w) - preference(y, x, w))


def dominates(x, y) -> bool:
    """True iff ``x_d >= y_d`` in every dimension."""
    x, y = _check(x, y)
    return bool(np.all(x >= y))


def projection(X, w) -> np.ndarray:
    """Weighted coordinate sum ``s(x) = sum_d w_d x_d`` for each row of ``X``."""
    X = np.asarray(X, dtype=float)
    w = np.asarray(w, dtype=float)
    if X.shape[-1] != w.shape[0]:
        raise ValueError(f"length mismatch: {X.shape} vs {w.shape}")
    # elementwise product + row sum keeps the summation order identical for
    # every row, so componentwise dominance always implies s(x) >= s(y)
    return np.sum(X * w, axis=-1)


def dominance_matrix(X, rows=None) -> np.ndarray:
    """``D[a, j] = dominates(X[rows[a]], X[j])`` as a boolean matrix."""
    X = np.asarray(X, dtype=float)
    R = X if rows is None else X[rows]
    return np.all(R[:, None, :] >= X[None, :, :], axis=2)
