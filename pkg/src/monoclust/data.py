"""Dataset container, CSV/KEEL ingestion and preprocessing."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

MISSING_TOKENS = frozenset({"", "?"})


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ``n x u`` feature matrix with optional ordinal class labels.

    Missing cells are stored as NaN. ``labels`` holds ordinal integers
    ``0..m-1``; ``classes[c]`` is the original name of class ``c``.
    """

    features: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: tuple = ()
    weights: Optional[np.ndarray] = None
    classes: tuple = ()
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"features must be a non-empty 2-D matrix, got shape {X.shape}")
        n, u = X.shape
        object.__setattr__(self, "features", _frozen(X))

        names = tuple(self.feature_names) or tuple(f"x{d}" for d in range(u))
        if len(names) != u:
            raise ValueError(f"expected {u} feature names, got {len(names)}")
        object.__setattr__(self, "feature_names", names)

        w = np.ones(u) if self.weights is None else np.asarray(self.weights, dtype=float)
        if w.shape != (u,):
            raise ValueError(f"weights must have shape ({u},), got {w.shape}")
        if np.any(w < 0) or np.any(w > 1):
            raise ValueError("feature weights must lie in [0, 1]")
        object.__setattr__(self, "weights", _frozen(w))

        if self.labels is not None:
            y = np.asarray(self.labels)
            if y.shape != (n,):
                raise ValueError(f"labels must have shape ({n},), got {y.shape}")
            y = y.astype(np.int64)
            if y.min() < 0:
                raise ValueError("labels must be non-negative ordinal integers")
            object.__setattr__(self, "labels", _frozen(y))
            if not self.classes:
                object.__setattr__(self, "classes", tuple(str(c) for c in range(int(y.max()) + 1)))
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def u(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            return 0
        return len(np.unique(self.labels))

    @property
    def missing(self) -> np.ndarray:
        """Boolean mask of missing cells."""
        return np.isnan(self.features)

    def replace(self, **changes) -> "Dataset":
        kw = dict(features=self.features, labels=self.labels, feature_names=self.feature_names,
                  weights=self.weights, classes=self.classes, name=self.name)
        kw.update(changes)
        return Dataset(**kw)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        if (self.labels is None) != (other.labels is None):
            return False
        return (
            self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features, equal_nan=True)
            and (self.labels is None or np.array_equal(self.labels, other.labels))
            and self.feature_names == other.feature_names
            and np.array_equal(self.weights, other.weights)
            and self.classes == other.classes
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard clustering of ``n`` instances into ``k`` clusters.

    ``labels`` are 0-based cluster indices. ``rank[j]`` is the cluster that
    occupies ordinal position ``j`` (ascending); it is the identity once
    :func:`monoclust.clustering.order_clusters` has relabelled the partition.
    """

    labels: np.ndarray
    centroids: np.ndarray
    rank: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        y = np.asarray(self.labels, dtype=np.int64)
        C = np.asarray(self.centroids, dtype=float)
        if y.ndim != 1 or C.ndim != 2:
            raise ValueError("labels must be 1-D and centroids 2-D")
        k = C.shape[0]
        if y.size and (y.min() < 0 or y.max() >= k):
            raise ValueError(f"labels must lie in [0, {k})")
        rank = np.arange(k) if self.rank is None else np.asarray(self.rank, dtype=np.int64)
        if sorted(rank.tolist()) != list(range(k)):
            raise ValueError("rank must be a permutation of the cluster indices")
        object.__setattr__(self, "labels", _frozen(y))
        object.__setattr__(self, "centroids", _frozen(C))
        object.__setattr__(self, "rank", _frozen(rank))

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def _parse_cell(cell: str, row: int, col: int) -> float:
    cell = cell.strip()
    if cell in MISSING_TOKENS:
        return np.nan
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"row {row}, column {col}: non-numeric cell {cell!r}") from None


def _ordinal_labels(raw: Sequence[str]) -> tuple[np.ndarray, tuple]:
    """Map class names to ordinal integers by sorted order (numeric if possible)."""
    names = sorted(set(raw))
    try:
        names = sorted(names, key=float)
    except ValueError:
        pass
    index = {c: i for i, c in enumerate(names)}
    return np.array([index[c] for c in raw], dtype=np.int64), tuple(names)


def _build(rows, header, label_column, negate, name) -> Dataset:
    if not rows:
        raise ValueError("no data rows")
    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"ragged row {r}: expected {width} cells, got {len(row)}")
    if label_column is not None:
        if label_column < 0:
            label_column += width
        if not 0 <= label_column < width:
            raise ValueError(f"label column {label_column} out of range")
    cols = [c for c in range(width) if c != label_column]
    if not cols:
        raise ValueError("no feature columns")

    X = np.array([[_parse_cell(row[c], r, c) for c in cols] for r, row in enumerate(rows)])
    if negate:
        X[:, list(negate)] *= -1
    names = tuple(header[c].strip() for c in cols) if header else ()
    labels, classes = None, ()
    if label_column is not None:
        labels, classes = _ordinal_labels([row[label_column].strip() for row in rows])
    return Dataset(X, labels=labels, feature_names=names, classes=classes, name=name)


def load_csv(path, label_column: Optional[int] = -1, has_header: bool = True,
             negate: Sequence[int] = ()) -> Dataset:
    """Read a comma-separated file into a :class:`Dataset`.

    ``label_column`` indexes the raw columns (negative values count from the
    end; ``None`` means no labels). Empty cells and ``?`` are missing values.
    Feature indices listed in ``negate`` are multiplied by -1 so that every
    feature is maximisation-oriented.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    header = rows.pop(0) if has_header and rows else None
    return _build(rows, header, label_column, negate, path.stem)


def load_keel(path, negate: Sequence[int] = ()) -> Dataset:
    """Read a KEEL ``.dat`` file (``@attribute`` header, class last)."""
    path = Path(path)
    names, rows, in_data = [], [], False
    with path.open() as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if not in_data:
                low = line.lower()
                if low.startswith("@attribute"):
                    names.append(line.split()[1])
                elif low.startswith("@data"):
                    in_data = True
                continue
            rows.append([c.strip() for c in line.split(",")])
    return _build(rows, names or None, -1, negate, path.stem)


def write_csv(d: Dataset, path) -> None:
    """Write ``d`` as CSV with a header; labels (if any) go in the last column."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(d.feature_names) + (["class"] if d.labels is not None else []))
        for i, row in enumerate(d.features):
            cells = ["?" if np.isnan(v) else repr(float(v)) for v in row]
            if d.labels is not None:
                cells.append(d.classes[d.labels[i]])
            w.writerow(cells)


def standardize(d: Dataset) -> Dataset:
    """Z-score every column with the population standard deviation.

    Constant columns become all-zero.
    """
    X = d.features
    if np.isnan(X).any():
        raise ValueError("standardize requires a dataset without missing values")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    Z = X - mean
    # range, not std: the mean of a constant column can carry rounding error
    nonconst = (np.ptp(X, axis=0) > 0) & (std > 0)
    Z[:, nonconst] /= std[nonconst]
    Z[:, ~nonconst] = 0.0
    return d.replace(features=Z)


def knn_impute(d: Dataset, k_neighbors: int = 5) -> Dataset:
    """Fill missing cells with the mean of the ``k_neighbors`` nearest donors.

    For a row with missing feature ``c``, donors are rows where ``c`` is
    observed; distance is Euclidean over the features observed in both rows,
    rescaled by ``sqrt(u / n_shared)``. If fewer than ``k_neighbors`` donors
    exist, all of them are used. Observed cells are never modified.
    """
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be positive")
    X = d.features
    miss = np.isnan(X)
    if not miss.any():
        return d
    empty = np.flatnonzero(miss.all(axis=0))
    if empty.size:
        raise ValueError(f"columns {empty.tolist()} are missing in every row")

    n, u = X.shape
    out = X.copy()
    filled = np.where(miss, 0.0, X)
    obs = ~miss
    for i in np.flatnonzero(miss.any(axis=1)):
        shared = obs & obs[i]
        n_shared = shared.sum(axis=1)
        diff2 = np.where(shared, (filled - filled[i]) ** 2, 0.0).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            dist = np.sqrt(diff2 * u / n_shared)
        dist[n_shared == 0] = np.inf
        dist[i] = np.inf
        for c in np.flatnonzero(miss[i]):
            donors = np.flatnonzero(obs[:, c] & (np.arange(n) != i))
            order = donors[np.argsort(dist[donors], kind="stable")][:k_neighbors]
            out[i, c] = X[order, c].mean()
    return d.replace(features=out)
