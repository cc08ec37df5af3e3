"""Bayesian sign test with a region of practical equivalence (rope)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class RopeInterval:
    r_min: float
    r_max: float

    def __post_init__(self):
        if not self.r_min <= 0 <= self.r_max:
            raise ValueError(f"rope [{self.r_min}, {self.r_max}] must contain zero")

    def mirrored(self) -> "RopeInterval":
        return RopeInterval(-self.r_max, -self.r_min)


DEFAULT_ROPES = {
    "ari": RopeInterval(-0.02, 0.02),
    "nmi": RopeInterval(-0.01, 0.01),
    "unsat": RopeInterval(-0.01, 0.01),
}


@dataclass
class SignTestResult:
    p_left: float
    p_rope: float
    p_right: float
    n_left: int
    n_rope: int
    n_right: int
    samples: np.ndarray  # (n_samples, 3) barycentric triplets

    def summary(self) -> dict:
        return {k: getattr(self, k) for k in ("p_left", "p_rope", "p_right", "n_left", "n_rope", "n_right")}

    def write_summary(self, path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2))

    def write_samples(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["left", "rope", "right"])
            w.writerows(self.samples.tolist())


def bayesian_sign_test(a, b, rope: RopeInterval = RopeInterval(-0.01, 0.01), n_samples: int = 100_000,
                       prior_weight: float = 1.0, rng=None) -> SignTestResult:
    """Posterior over (A worse, equivalent, A better) for paired results ``a`` vs ``b``.

    Differences ``a - b`` are counted below, inside and above the rope; the
    counts plus ``prior_weight`` pseudo-observations on the rope parameterise
    a Dirichlet, sampled through normalised unit-scale gamma draws.

    Swapping ``a`` and ``b`` (and mirroring the rope) swaps ``p_left`` and
    ``p_right`` exactly for a given seed: the two outer gammas are always
    drawn larger-shape first, and when their shapes tie both outer
    probabilities are reported as the pooled mean of the two columns.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"result vectors differ in shape: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("need at least one paired result")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if prior_weight < 0:
        raise ValueError("prior_weight must be >= 0")

    diff = a - b
    n_left = int(np.sum(diff < rope.r_min))
    n_right = int(np.sum(diff > rope.r_max))
    n_rope = a.size - n_left - n_right

    rng = np.random.default_rng(rng)
    g_rope = rng.gamma(n_rope + prior_weight, size=n_samples)
    g_big = rng.gamma(max(n_left, n_right), size=n_samples)
    g_small = rng.gamma(min(n_left, n_right), size=n_samples)
    total = g_rope + g_big + g_small
    big, small = g_big / total, g_small / total
    rope_col = g_rope / total
    left, right = (big, small) if n_left >= n_right else (small, big)

    p_rope = float(rope_col.mean())
    if n_left == n_right:
        p_left = p_right = float((left.mean() + right.mean()) / 2)
    else:
        p_left, p_right = float(left.mean()), float(right.mean())
    return SignTestResult(p_left, p_rope, p_right, n_left, n_rope, n_right,
                          np.column_stack([left, rope_col, right]))
