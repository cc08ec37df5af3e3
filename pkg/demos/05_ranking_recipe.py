"""Turning a university-ranking style table into an ordinal dataset.

The real ranking table is not bundled, so this builds a toy one with the
same shape: a rank column such as "101-150", a few indicator columns, a
country column and some gaps. A JSON-style recipe says which columns to
drop and how many institutions fall into each class, best first.

Run: python demos/05_ranking_recipe.py
"""

import csv
import tempfile
from pathlib import Path

import numpy as np

from monoclust import EMConfig, nmi_index, pckm_mono, generate_constraints
from monoclust.bench import apply_recipe, preprocess

rng = np.random.default_rng(0)
tmp = Path(tempfile.mkdtemp())
with (tmp / "ranking.csv").open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["rank", "name", "country", "alumni", "award", "hici", "pub"])
    for i in range(700):
        strength = 100 - i / 7 + rng.normal(0, 4)
        cells = [max(0.0, strength + rng.normal(0, 8)) for _ in range(4)]
        cells = ["" if rng.random() < 0.03 else f"{c:.1f}" for c in cells]
        band = f"{i + 1}" if i < 100 else f"{(i // 50) * 50 + 1}-{(i // 50 + 1) * 50}"
        w.writerow([band, f"U{i}", rng.choice(["A", "B", "C"])] + cells)

recipe = {
    "path": "ranking.csv",
    "rank_column": "rank",
    "drop_columns": ["name", "country"],
    "chunks": [50, 50, 100, 100, 100, 100, 100],
    "impute_k": 5,
}
d = preprocess(apply_recipe(recipe, tmp))
print(f"{d.n} institutions, features {d.feature_names}, class sizes {np.bincount(d.labels).tolist()}")
print(f"NMI of the ranking classes: {nmi_index(d.labels, d):.3f}")

cs = generate_constraints(d.labels, 0.10, np.random.default_rng(1))
out = pckm_mono(d, cs, EMConfig(k=7, seed=0))
print(f"pckm_mono: NMI {nmi_index(out.partition.labels, d):.3f}, cluster sizes {out.partition.sizes.tolist()}")
