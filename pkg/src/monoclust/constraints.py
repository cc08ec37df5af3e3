"""Must-link / cannot-link constraint sets: generation, accounting, I/O."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def _canonical_pairs(pairs) -> np.ndarray:
    P = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if (P < 0).any():
        raise ValueError("instance indices must be non-negative")
    if (P[:, 0] == P[:, 1]).any():
        raise ValueError("self-pairs are not allowed")
    P = np.sort(P, axis=1)
    # dedupe while keeping first-seen order
    _, first = np.unique(P, axis=0, return_index=True)
    P = P[np.sort(first)]
    P.flags.writeable = False
    return P


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Unordered instance pairs that must (``ml``) or cannot (``cl``) share a cluster.

    Pairs are stored as ``(i, j)`` rows with ``i < j`` (0-based), deduplicated.
    """

    ml: np.ndarray
    cl: np.ndarray

    def __post_init__(self):
        ml = _canonical_pairs(self.ml)
        cl = _canonical_pairs(self.cl)
        if ml.size and cl.size:
            both = {tuple(p) for p in ml.tolist()} & {tuple(p) for p in cl.tolist()}
            if both:
                raise ValueError(f"pairs in both ML and CL: {sorted(both)[:5]}")
        object.__setattr__(self, "ml", ml)
        object.__setattr__(self, "cl", cl)

    @classmethod
    def empty(cls) -> "ConstraintSet":
        return cls(np.empty((0, 2), np.int64), np.empty((0, 2), np.int64))

    def __len__(self):
        return len(self.ml) + len(self.cl)

    def __eq__(self, other):
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return np.array_equal(self.ml, other.ml) and np.array_equal(self.cl, other.cl)

    __hash__ = None

    @property
    def max_index(self) -> int:
        if not len(self):
            return -1
        return int(max(self.ml.max(initial=-1), self.cl.max(initial=-1)))

    def partners(self, n: int) -> tuple[list, list]:
        """Per-instance adjacency lists ``(ml_partners, cl_partners)``."""
        if self.max_index >= n:
            raise ValueError(f"constraint index {self.max_index} out of range for n={n}")
        ml = [[] for _ in range(n)]
        cl = [[] for _ in range(n)]
        for adj, P in ((ml, self.ml), (cl, self.cl)):
            for i, j in P.tolist():
                adj[i].append(j)
                adj[j].append(i)
        return ml, cl


def constraint_count(n: int, fraction: float) -> int:
    """``n_f (n_f - 1) / 2`` with ``n_f = floor(fraction * n)``."""
    n_f = int(np.floor(fraction * n + 1e-9))
    return n_f * (n_f - 1) // 2


def generate_constraints(labels, fraction: float, rng) -> ConstraintSet:
    """Draw random instance pairs and label them ML/CL from ground truth.

    Exactly ``n_f (n_f - 1) / 2`` distinct unordered pairs are drawn
    uniformly (duplicates are redrawn), with ``n_f = floor(fraction * n)``.
    A pair is must-link when both labels agree, cannot-link otherwise.
    """
    labels = np.asarray(labels)
    n = labels.shape[0]
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    n_f = int(np.floor(fraction * n + 1e-9))
    if n_f < 2:
        raise ValueError(f"fraction {fraction} of n={n} gives n_f={n_f} < 2")
    total = n_f * (n_f - 1) // 2
    if total > n * (n - 1) // 2:
        raise ValueError("requested more pairs than exist")
    rng = np.random.default_rng(rng)

    seen, pairs = set(), []
    while len(pairs) < total:
        batch = max(2 * (total - len(pairs)), 16)
        i = rng.integers(0, n, size=batch)
        j = rng.integers(0, n, size=batch)
        for a, b in zip(i.tolist(), j.tolist()):
            if a == b:
                continue
            p = (a, b) if a < b else (b, a)
            if p in seen:
                continue
            seen.add(p)
            pairs.append(p)
            if len(pairs) == total:
                break
    P = np.array(pairs, dtype=np.int64)
    same = labels[P[:, 0]] == labels[P[:, 1]]
    return ConstraintSet(P[same], P[~same])


def violation_count(i: int, candidate: int, current_labels, cs: ConstraintSet) -> int:
    """Constraints involving ``i`` that would be violated if ``i`` joined ``candidate``.

    Partners whose current label is negative (unassigned) are ignored.
    """
    lab = np.asarray(current_labels)
    count = 0
    for P, must in ((cs.ml, True), (cs.cl, False)):
        if not len(P):
            continue
        hit = (P[:, 0] == i) | (P[:, 1] == i)
        other = np.where(P[hit, 0] == i, P[hit, 1], P[hit, 0])
        lj = lab[other]
        lj = lj[lj >= 0]
        count += int(np.sum(lj != candidate) if must else np.sum(lj == candidate))
    return count


def violated(labels, cs: ConstraintSet) -> tuple[int, int]:
    """Number of violated ``(ml, cl)`` constraints under ``labels``."""
    lab = np.asarray(labels)
    ml = int(np.sum(lab[cs.ml[:, 0]] != lab[cs.ml[:, 1]])) if len(cs.ml) else 0
    cl = int(np.sum(lab[cs.cl[:, 0]] == lab[cs.cl[:, 1]])) if len(cs.cl) else 0
    return ml, cl


def unsat(p, cs: ConstraintSet) -> float:
    """Fraction of constraints violated by a partition (or raw label vector)."""
    if not len(cs):
        return 0.0
    labels = getattr(p, "labels", p)
    return sum(violated(labels, cs)) / len(cs)


def save_constraints(cs: ConstraintSet, path, **meta) -> Path:
    """Write ``i,j,type`` rows and a ``<stem>.meta.json`` sidecar; return the sidecar path."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "type"])
        for tag, P in (("ML", cs.ml), ("CL", cs.cl)):
            for i, j in P.tolist():
                w.writerow([i, j, tag])
    side = path.with_suffix(".meta.json")
    side.write_text(json.dumps({"n_ml": len(cs.ml), "n_cl": len(cs.cl), **meta}, indent=2, sort_keys=True))
    return side


def load_constraints(path) -> tuple[ConstraintSet, dict]:
    """Inverse of :func:`save_constraints`. Metadata is ``{}`` if the sidecar is absent."""
    path = Path(path)
    ml, cl = [], []
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            tag = row["type"].strip().upper()
            pair = (int(row["i"]), int(row["j"]))
            if tag == "ML":
                ml.append(pair)
            elif tag == "CL":
                cl.append(pair)
            else:
                raise ValueError(f"unknown constraint type {row['type']!r}")
    side = path.with_suffix(".meta.json")
    meta = json.loads(side.read_text()) if side.exists() else {}
    return ConstraintSet(np.array(ml, np.int64).reshape(-1, 2), np.array(cl, np.int64).reshape(-1, 2)), meta
