"""EM clustering under monotonicity and pairwise constraints, plus baselines.

Five algorithms share one engine:

* :func:`pckm_mono` - monotonic distance + soft ML/CL penalties
* :func:`mono_kmeans` - monotonic distance only (purely monotonic baseline)
* :func:`kmeans` - Lloyd's algorithm
* :func:`cop_kmeans` - Lloyd's with hard constraints (may dead-end)
* :func:`pck_means` - squared Euclidean distance + soft ML/CL penalties
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constraints import ConstraintSet, violated
from .data import Dataset, Partition
from .preference import projection

SUCCESS = "success"
DEAD_END = "dead-end"


@dataclass(frozen=True)
class EMConfig:
    k: int
    max_iter: int = 100
    tol: float = 1e-4
    penalty_weight: float = 1.0
    seed: Optional[int] = None
    init: str = "random"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.penalty_weight < 0:
            raise ValueError("penalty_weight must be >= 0")
        if self.init != "random":
            raise ValueError(f"unknown init strategy {self.init!r}")


@dataclass
class ClusteringOutcome:
    partition: Optional[Partition]
    objective: float
    iterations: int
    converged: bool
    status: str = SUCCESS
    # (before, after) assignment-step objective per iteration, at fixed centroids
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        p = self.partition
        return {
            "status": self.status,
            "objective": None if np.isnan(self.objective) else float(self.objective),
            "iterations": self.iterations,
            "converged": self.converged,
            "labels": None if p is None else p.labels.tolist(),
            "centroids": None if p is None else p.centroids.tolist(),
            "rank": None if p is None else p.rank.tolist(),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "ClusteringOutcome":
        p = None
        if rec.get("labels") is not None:
            p = Partition(np.array(rec["labels"]), np.array(rec["centroids"], dtype=float),
                          np.array(rec["rank"]))
        obj = rec.get("objective")
        return cls(p, float("nan") if obj is None else obj, rec["iterations"],
                   rec["converged"], rec["status"])


def init_centroids(X, k: int, rng) -> np.ndarray:
    """Pick ``k`` distinct rows of ``X`` uniformly at random."""
    X = np.asarray(getattr(X, "features", X), dtype=float)
    n = X.shape[0]
    if k > n:
        raise ValueError(f"cannot draw k={k} centroids from n={n} instances")
    rng = np.random.default_rng(rng)
    return X[rng.choice(n, size=k, replace=False)].copy()


def order_clusters(p: Partition, d) -> Partition:
    """Relabel clusters in ascending order of centroid projection.

    ``d`` is a :class:`Dataset` (its weights are used) or a weight vector.
    Ties keep the original cluster order. The returned ``rank[j]`` is the
    cluster index, in the partition first passed through this function,
    that now carries label ``j``.
    """
    w = d.weights if isinstance(d, Dataset) else np.asarray(d, dtype=float)
    s = projection(p.centroids, w)
    order = np.argsort(s, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(p.k)
    return Partition(relabel[p.labels], p.centroids[order], p.rank[order])


def objective(d: Dataset, p: Partition, cs: ConstraintSet, penalty_weight: float = 1.0) -> float:
    """Hybrid objective: mean-over-clusters monotonic distance plus weighted violations.

    ``(1/K) * sum_i |s(x_i) - s(mu_{l_i})| + penalty_weight * (#violated ML + #violated CL)``
    """
    s = projection(d.features, d.weights)
    sc = projection(p.centroids, d.weights)
    dist = np.abs(s - sc[p.labels]).sum() / p.k
    return float(dist + penalty_weight * sum(violated(p.labels, cs)))


def _distances(X, C, metric, w):
    if metric == "mono":
        return np.abs(projection(X, w)[:, None] - projection(C, w)[None, :])
    diff = X[:, None, :] - C[None, :, :]
    return np.sum(diff * diff, axis=2)


def _m_step(X, labels, C, metric, w):
    """Cluster means; empty clusters are reseeded with the instance farthest
    from its own centroid under ``metric``."""
    k = C.shape[0]
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros_like(C)
    np.add.at(sums, labels, X)
    new = C.copy()
    full = counts > 0
    new[full] = sums[full] / counts[full, None]
    empty = np.flatnonzero(~full)
    if empty.size:
        own = _distances(X, new, metric, w)[np.arange(len(X)), labels]
        for h in empty:
            far = int(np.argmax(own))
            new[h] = X[far]
            own[far] = -np.inf
    return new


def _assignment_cost(D, labels, cs, pw):
    return float(D[np.arange(len(labels)), labels].sum() + pw * sum(violated(labels, cs)))


def _check_input(d: Dataset, cfg: EMConfig):
    if np.isnan(d.features).any():
        raise ValueError("dataset has missing values; impute first")
    if cfg.k > d.n:
        raise ValueError(f"k={cfg.k} exceeds n={d.n}")


def _soft_em(d: Dataset, cs: ConstraintSet, cfg: EMConfig, metric: str) -> ClusteringOutcome:
    _check_input(d, cfg)
    X, w, k, pw = d.features, d.weights, cfg.k, cfg.penalty_weight
    n = d.n
    rng = np.random.default_rng(cfg.seed)
    C = init_centroids(X, k, rng)
    ml_adj, cl_adj = cs.partners(n)
    constrained = [i for i in range(n) if ml_adj[i] or cl_adj[i]]

    labels = np.full(n, -1, dtype=np.int64)
    trace, converged, it = [], False, 0
    for it in range(1, cfg.max_iter + 1):
        D = _distances(X, C, metric, w)
        before = _assignment_cost(D, labels, cs, pw) if it > 1 else np.nan

        # E-step: unconstrained instances are independent of everyone else;
        # constrained ones are swept in index order with in-place updates
        lab = np.argmin(D, axis=1)
        if constrained:
            cur = labels.tolist()
            rows = D.tolist()
            for i in constrained:
                counts = [0] * k
                n_ml = 0
                for j in ml_adj[i]:
                    lj = cur[j]
                    if lj >= 0:
                        n_ml += 1
                        counts[lj] -= 1
                for j in cl_adj[i]:
                    lj = cur[j]
                    if lj >= 0:
                        counts[lj] += 1
                row = rows[i]
                best, best_cost = 0, row[0] + pw * (counts[0] + n_ml)
                for h in range(1, k):
                    c = row[h] + pw * (counts[h] + n_ml)
                    if c < best_cost:
                        best, best_cost = h, c
                cur[i] = best
            lab[constrained] = np.take(cur, constrained)
        labels = lab
        trace.append((before, _assignment_cost(D, labels, cs, pw)))

        new_C = _m_step(X, labels, C, metric, w)
        shift = np.linalg.norm(new_C - C, axis=1).mean()
        C = new_C
        if shift < cfg.tol:
            converged = True
            break

    part = order_clusters(Partition(labels, C), d)
    return ClusteringOutcome(part, objective(d, part, cs, pw), it, converged, SUCCESS, trace)


def pckm_mono(d: Dataset, cs: ConstraintSet, cfg: EMConfig) -> ClusteringOutcome:
    """Pairwise Constrained K-Means - Monotonic.

    E-step: each instance (in index order, seeing labels already updated in
    this sweep) joins ``argmin_h |s(x_i) - s(mu_h)| + penalty_weight * v(i, h)``
    where ``v`` counts violated constraints against currently labelled
    partners. M-step: centroids are cluster means. Stops when the mean
    centroid shift drops below ``cfg.tol`` or after ``cfg.max_iter`` rounds.
    """
    return _soft_em(d, cs, cfg, "mono")


def mono_kmeans(d: Dataset, cfg: EMConfig) -> ClusteringOutcome:
    """EM with the monotonic distance alone.

    Equivalent to 1-D k-means on the projection ``s(x)``, so clusters are
    intervals of ``s`` and the ranked partition never inverts dominance.
    """
    return _soft_em(d, ConstraintSet.empty(), cfg, "mono")


def kmeans(d: Dataset, cfg: EMConfig) -> ClusteringOutcome:
    return _soft_em(d, ConstraintSet.empty(), cfg, "sqeuclid")


def pck_means(d: Dataset, cs: ConstraintSet, cfg: EMConfig) -> ClusteringOutcome:
    """Soft-penalty constrained k-means with squared Euclidean distance."""
    return _soft_em(d, cs, cfg, "sqeuclid")


def cop_kmeans(d: Dataset, cs: ConstraintSet, cfg: EMConfig) -> ClusteringOutcome:
    """COP-KMeans: nearest centroid that breaks no constraint with already
    assigned instances. Returns ``status == "dead-end"`` (and no partition)
    as soon as some instance has no feasible cluster."""
    _check_input(d, cfg)
    X, w, k = d.features, d.weights, cfg.k
    n = d.n
    rng = np.random.default_rng(cfg.seed)
    C = init_centroids(X, k, rng)
    ml_adj, cl_adj = cs.partners(n)
    constrained = [i for i in range(n) if ml_adj[i] or cl_adj[i]]

    labels = np.full(n, -1, dtype=np.int64)
    trace, converged, it = [], False, 0
    for it in range(1, cfg.max_iter + 1):
        D = _distances(X, C, "sqeuclid", w)
        lab = np.argmin(D, axis=1)
        if constrained:
            cur = [-1] * n
            prefs = np.argsort(D[constrained], axis=1, kind="stable").tolist()
            for i, pref in zip(constrained, prefs):
                ml_lab = {cur[j] for j in ml_adj[i]} - {-1}
                cl_lab = {cur[j] for j in cl_adj[i]} - {-1}
                for h in pref:
                    if h in cl_lab or (ml_lab and ml_lab != {h}):
                        continue
                    cur[i] = h
                    break
                else:
                    return ClusteringOutcome(None, float("nan"), it, False, DEAD_END, trace)
            lab[constrained] = np.take(cur, constrained)
        labels = lab
        trace.append((np.nan, _assignment_cost(D, labels, cs, 0.0)))

        new_C = _m_step(X, labels, C, "sqeuclid", w)
        shift = np.linalg.norm(new_C - C, axis=1).mean()
        C = new_C
        if shift < cfg.tol:
            converged = True
            break

    part = order_clusters(Partition(labels, C), d)
    return ClusteringOutcome(part, objective(d, part, cs, cfg.penalty_weight), it, converged, SUCCESS, trace)


METHODS = {
    "pckm_mono": pckm_mono,
    "mono_kmeans": lambda d, cs, cfg: mono_kmeans(d, cfg),
    "cop_kmeans": cop_kmeans,
    "kmeans": lambda d, cs, cfg: kmeans(d, cfg),
    "pck_means": pck_means,
}


def run_method(name: str, d: Dataset, cs: ConstraintSet, cfg: EMConfig) -> ClusteringOutcome:
    """Dispatch by method name with a uniform ``(dataset, constraints, config)`` signature."""
    try:
        fn = METHODS[name]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; choose from {sorted(METHODS)}") from None
    return fn(d, cs, cfg)
