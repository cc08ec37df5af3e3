"""External partition quality: ARI, Non-Monotonicity Index, Unsat."""

import numpy as np

from .constraints import unsat
from .preference import dominance_matrix

__all__ = ["ari", "nmi_index", "nmi_pairwise", "unsat", "contingency"]

_CHUNK = 256


def contingency(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"label vectors differ in shape: {a.shape} vs {b.shape}")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def _pairs(x):
    return int((x * (x - 1) // 2).sum())


def ari(a, b) -> float:
    """Hubert-Arabie adjusted Rand index.

    Returns 1.0 when both partitions are identical up to relabelling, including
    the degenerate case where the chance-corrected denominator vanishes.
    """
    table = contingency(a, b)
    n = int(table.sum())
    if n < 2:
        raise ValueError("ARI needs at least two instances")
    index = _pairs(table)
    sa = _pairs(table.sum(axis=1))
    sb = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    expected = sa * sb / total
    max_index = (sa + sb) / 2
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))


def _clashes(labels, X):
    """Yield ``(rows, clash)`` blocks with ``clash[a, j]`` true when
    ``X[rows[a]]`` dominates ``X[j]`` but carries a lower label."""
    n = X.shape[0]
    for start in range(0, n, _CHUNK):
        rows = np.arange(start, min(start + _CHUNK, n))
        dom = dominance_matrix(X, rows)
        yield rows, dom & (labels[rows][:, None] < labels[None, :])


def _prepare(labels, d):
    X = np.asarray(getattr(d, "features", d), dtype=float)
    labels = np.asarray(labels)
    if labels.shape != (X.shape[0],):
        raise ValueError("labels and dataset differ in length")
    return labels, X


def nmi_index(labels, d) -> float:
    """Non-Monotonicity Index: share of instances involved in at least one clash.

    Instances ``i`` and ``j`` clash when ``x_i`` dominates ``x_j``
    componentwise yet ``labels[i] < labels[j]``. Labels must be ordinal
    (e.g. clusters relabelled by :func:`~monoclust.clustering.order_clusters`).
    ``d`` is a :class:`~monoclust.data.Dataset` or a feature matrix.
    """
    labels, X = _prepare(labels, d)
    n = X.shape[0]
    bad = np.zeros(n, dtype=bool)
    for rows, clash in _clashes(labels, X):
        bad[rows] |= clash.any(axis=1)
        bad |= clash.any(axis=0)
    return float(bad.sum() / n)


def nmi_pairwise(labels, d) -> float:
    """Clashing pairs divided by comparable pairs (0.0 if nothing is comparable).

    Pair-granularity companion to :func:`nmi_index`.
    """
    labels, X = _prepare(labels, d)
    n = X.shape[0]
    comparable = clashing = 0
    for start in range(0, n, _CHUNK):
        rows = np.arange(start, min(start + _CHUNK, n))
        R = X[rows]
        dom = np.all(R[:, None, :] >= X[None, :, :], axis=2)
        rev = np.all(X[None, :, :] >= R[:, None, :], axis=2)
        later = np.arange(n)[None, :] > rows[:, None]
        li, lj = labels[rows][:, None], labels[None, :]
        comparable += int((later & (dom | rev)).sum())
        clashing += int((later & ((dom & (li < lj)) | (rev & (lj < li)))).sum())
    return clashing / comparable if comparable else 0.0
