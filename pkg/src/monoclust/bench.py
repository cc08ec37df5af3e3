"""Experiment matrix execution, aggregation and report emission."""

from __future__ import annotations

import csv
import json
import logging
import platform
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .clustering import DEAD_END, METHODS, EMConfig, run_method
from .constraints import ConstraintSet, generate_constraints, unsat
from .data import Dataset, knn_impute, load_csv, load_keel, standardize
from .metrics import ari, nmi_index
from .stats import DEFAULT_ROPES, bayesian_sign_test

log = logging.getLogger(__name__)

MEASURES = ("ari", "nmi", "unsat")
WORST = {"ari": -1.0, "nmi": 1.0, "unsat": 1.0}
REFERENCE_METHOD = "pckm_mono"
NO_RESULT = "-"

# Artiset-like fixtures; every entry has n <= 2000
SYNTHETIC_SUITE = (
    {"name": "syn_2d_10c", "n": 899, "u": 2, "k": 10, "noise": 0.1, "seed": 1},
    {"name": "syn_4d_3c", "n": 625, "u": 4, "k": 3, "noise": 0.0, "seed": 2},
    {"name": "syn_4d_4c", "n": 500, "u": 4, "k": 4, "noise": 0.1, "seed": 3},
    {"name": "syn_6d_4c", "n": 1728, "u": 6, "k": 4, "noise": 0.2, "seed": 4},
    {"name": "syn_9d_2c", "n": 683, "u": 9, "k": 2, "noise": 0.05, "seed": 5},
    {"name": "syn_13d_4c", "n": 506, "u": 13, "k": 4, "noise": 0.3, "seed": 6},
    {"name": "syn_3d_9c", "n": 2000, "u": 3, "k": 9, "noise": 0.1, "seed": 7},
)


def make_synthetic(n: int, u: int, k: int, noise: float = 0.0, rng=None, name: str = "") -> Dataset:
    """Uniform points in ``[0, 1]^u`` labelled by quantile bucket of ``sum(x)``.

    With probability ``noise`` an instance's class moves one bucket up or down
    (clamped to ``[0, k-1]``), which breaks monotonicity in a controlled way.
    """
    if not (n >= k >= 1 and u >= 1):
        raise ValueError(f"need n >= k >= 1 and u >= 1, got n={n}, k={k}, u={u}")
    if not 0 <= noise <= 1:
        raise ValueError("noise must lie in [0, 1]")
    rng = np.random.default_rng(rng)
    X = rng.random((n, u))
    order = np.argsort(X.sum(axis=1), kind="stable")
    y = np.empty(n, dtype=np.int64)
    y[order] = np.arange(n) * k // n
    flip = rng.random(n) < noise
    step = rng.choice([-1, 1], size=n)
    y = np.where(flip, np.clip(y + step, 0, k - 1), y)
    return Dataset(X, labels=y, classes=tuple(str(c) for c in range(k)), name=name or f"synthetic_{n}x{u}_k{k}")


def bundled_synthetic() -> list:
    return [make_synthetic(s["n"], s["u"], s["k"], s["noise"], s["seed"], s["name"]) for s in SYNTHETIC_SUITE]


def rank_chunk_labels(n: int, chunks) -> np.ndarray:
    """Ordinal classes for ``n`` rows sorted best-first, cut into consecutive chunks.

    The first chunk receives the highest class. Rows past the last chunk get -1.
    """
    y = np.full(n, -1, dtype=np.int64)
    start = 0
    for c, size in enumerate(chunks):
        y[start:start + size] = len(chunks) - 1 - c
        start += size
    return y


def _leading_number(text: str) -> float:
    m = re.search(r"[-+]?\d+(\.\d+)?", text)
    return float(m.group()) if m else np.inf


def apply_recipe(recipe: dict, base_dir=".") -> Dataset:
    """Build a ranked dataset from a raw table following a JSON recipe.

    Recognised keys: ``path``; ``filter`` (``{"column", "value"}``);
    ``rank_column`` (rows sorted ascending by its leading number, best first);
    ``drop_columns``; ``feature_columns`` (default: everything not dropped);
    ``chunks`` (class sizes, best first); ``impute_k`` (default 5).
    Missing cells are ``""``, ``"?"`` or non-numeric text.
    """
    path = Path(base_dir) / recipe["path"]
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    flt = recipe.get("filter")
    if flt:
        rows = [r for r in rows if r[flt["column"]].strip() == str(flt["value"])]
    rank_col = recipe["rank_column"]
    rows.sort(key=lambda r: _leading_number(r[rank_col]))
    chunks = recipe["chunks"]
    rows = rows[:sum(chunks)]
    if len(rows) < sum(chunks):
        raise ValueError(f"recipe needs {sum(chunks)} rows, table has {len(rows)}")

    drop = set(recipe.get("drop_columns", ())) | {rank_col}
    if flt:
        drop.add(flt["column"])
    cols = recipe.get("feature_columns") or [c for c in rows[0] if c not in drop]

    def num(v):
        try:
            return float(v)
        except (TypeError, ValueError):
            return np.nan

    X = np.array([[num(r[c]) for c in cols] for r in rows])
    d = Dataset(X, labels=rank_chunk_labels(len(rows), chunks), feature_names=tuple(cols),
                name=recipe.get("name", path.stem))
    if np.isnan(X).any():
        d = knn_impute(d, recipe.get("impute_k", 5))
    return d


def load_dataset(spec, base_dir=".") -> Dataset:
    """Resolve a dataset entry of an experiment config.

    ``spec`` is a path (``.dat`` files are read as KEEL, anything else as CSV
    with header and labels last) or a dict with one of the keys ``path``,
    ``synthetic`` or ``recipe``.
    """
    if isinstance(spec, (str, Path)):
        spec = {"path": str(spec)}
    if "synthetic" in spec:
        s = dict(spec["synthetic"])
        return make_synthetic(s["n"], s["u"], s["k"], s.get("noise", 0.0), s.get("seed"),
                              spec.get("name", s.get("name", "")))
    if "recipe" in spec:
        return apply_recipe(spec["recipe"], base_dir)
    path = Path(base_dir) / spec["path"]
    negate = spec.get("negate", ())
    if path.suffix == ".dat":
        d = load_keel(path, negate=negate)
    else:
        d = load_csv(path, label_column=spec.get("label_column", -1),
                     has_header=spec.get("has_header", True), negate=negate)
    return d.replace(name=spec.get("name", d.name))


def preprocess(d: Dataset, do_standardize: bool = True, impute_k: int = 5) -> Dataset:
    if np.isnan(d.features).any():
        d = knn_impute(d, impute_k)
    return standardize(d) if do_standardize else d


@dataclass
class ExperimentConfig:
    datasets: list
    fractions: tuple = (0.10, 0.15, 0.20)
    methods: tuple = tuple(METHODS)
    repeats: int = 50
    seed: int = 0
    max_iter: int = 100
    tol: float = 1e-4
    penalty_weight: float = 1.0
    fixed_constraints: bool = False
    standardize: bool = True
    signtest_samples: int = 100_000
    jobs: int = 1
    out: Optional[str] = None

    def __post_init__(self):
        self.datasets = list(self.datasets)
        self.fractions = tuple(float(f) for f in self.fractions)
        self.methods = tuple(self.methods)
        if not self.datasets:
            raise ValueError("no datasets configured")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if not self.fractions or any(not 0 < f <= 1 for f in self.fractions):
            raise ValueError("fractions must be non-empty and lie in (0, 1]")
        if not self.methods:
            raise ValueError("methods must be non-empty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {sorted(METHODS)}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fractions"], d["methods"] = list(self.fractions), list(self.methods)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if "config" in d and "datasets" not in d:  # a report manifest
            d = d["config"]
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    def run_seeds(self) -> list:
        return [self.seed + r for r in range(self.repeats)]


RAW_COLUMNS = ("dataset", "fraction", "method", "run", "seed", "status", "ari", "nmi", "unsat",
               "iterations", "converged", "objective", "n_ml", "n_cl")


@dataclass
class ResultsTable:
    """One row per (dataset, fraction, method, run); ``wall_time`` in seconds."""

    rows: list = field(default_factory=list)
    config: Optional[ExperimentConfig] = None

    def __len__(self):
        return len(self.rows)

    def column(self, name, **where) -> np.ndarray:
        return np.array([r[name] for r in self.rows if all(r[k] == v for k, v in where.items())])

    def write_raw(self, path) -> None:
        _write_rows(path, RAW_COLUMNS, self.rows)

    def write_timings(self, path) -> None:
        _write_rows(path, ("dataset", "fraction", "method", "run", "wall_time"), self.rows)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _write_rows(path, columns, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])


def _evaluate(d: Dataset, cs: ConstraintSet, outcome) -> dict:
    if outcome.status == DEAD_END:
        return dict(WORST)
    p = outcome.partition
    return {"ari": ari(d.labels, p.labels), "nmi": nmi_index(p.labels, d), "unsat": unsat(p, cs)}


def _constraint_rng(seed: int, dataset_index: int, fraction_index: int):
    return np.random.default_rng([seed, dataset_index, fraction_index])


def _run_cell(task):
    d, name, fraction, run, seed, cs, cfg = task
    k = d.n_classes
    out = []
    for method in cfg.methods:
        em = EMConfig(k=k, max_iter=cfg.max_iter, tol=cfg.tol, penalty_weight=cfg.penalty_weight, seed=seed)
        t0 = time.perf_counter()
        oc = run_method(method, d, cs, em)
        wall = time.perf_counter() - t0
        row = {"dataset": name, "fraction": fraction, "method": method, "run": run, "seed": seed,
               "status": oc.status, "iterations": oc.iterations, "converged": oc.converged,
               "objective": float(oc.objective), "n_ml": len(cs.ml), "n_cl": len(cs.cl), "wall_time": wall}
        row.update(_evaluate(d, cs, oc))
        out.append(row)
    return out


def run_experiment(cfg: ExperimentConfig, base_dir=".") -> ResultsTable:
    """Run every method on every (dataset, fraction, run) cell.

    Run ``r`` uses seed ``cfg.seed + r`` for centroid initialisation. Constraint
    sets are drawn per run (or once per dataset/fraction with
    ``fixed_constraints``). Dead-end COP-KMeans runs get the worst metric values.
    """
    tasks = []
    for di, spec in enumerate(cfg.datasets):
        d = load_dataset(spec, base_dir)
        if d.labels is None:
            raise ValueError(f"dataset {d.name!r} has no labels")
        d = preprocess(d, cfg.standardize)
        name = d.name or f"dataset{di}"
        for fi, fraction in enumerate(cfg.fractions):
            fixed = None
            if cfg.fixed_constraints:
                fixed = generate_constraints(d.labels, fraction, _constraint_rng(cfg.seed, di, fi))
            for run, seed in enumerate(cfg.run_seeds()):
                cs = fixed if fixed is not None else generate_constraints(
                    d.labels, fraction, _constraint_rng(seed, di, fi))
                tasks.append((d, name, fraction, run, seed, cs, cfg))
    log.info("running %d cells x %d methods", len(tasks), len(cfg.methods))

    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_run_cell, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))
    else:
        results = [_run_cell(t) for t in tasks]
    return ResultsTable([row for cell in results for row in cell], cfg)


@dataclass
class Summary:
    cells: list  # per (dataset, fraction, method)
    grand: list  # per (fraction, method), across datasets
    table: ResultsTable

    @property
    def methods(self):
        seen = dict.fromkeys(r["method"] for r in self.cells)
        return list(seen)


def aggregate(t: ResultsTable) -> Summary:
    """Mean and (population) std per cell, plus per-method grand means.

    A COP-KMeans cell where every run dead-ended is flagged ``no_result``
    and left out of that method's grand mean.
    """
    if not len(t):
        raise ValueError("empty results table")
    groups: dict = {}
    for r in t.rows:
        groups.setdefault((r["dataset"], r["fraction"], r["method"]), []).append(r)

    cells = []
    for (ds, fr, m), rs in groups.items():
        dead = sum(r["status"] == DEAD_END for r in rs)
        cell = {"dataset": ds, "fraction": fr, "method": m, "runs": len(rs), "dead_ends": dead,
                "no_result": dead == len(rs)}
        for meas in MEASURES + ("iterations",):
            v = np.array([r[meas] for r in rs], dtype=float)
            cell[f"{meas}_mean"] = float(v.mean())
            cell[f"{meas}_std"] = float(v.std())
        cells.append(cell)

    grand_groups: dict = {}
    for c in cells:
        if not c["no_result"]:
            grand_groups.setdefault((c["fraction"], c["method"]), []).append(c)
    grand = []
    for (fr, m), cs in grand_groups.items():
        g = {"fraction": fr, "method": m, "datasets": len(cs)}
        for meas in MEASURES:
            g[f"{meas}_mean"] = float(np.mean([c[f"{meas}_mean"] for c in cs]))
        grand.append(g)
    return Summary(cells, grand, t)


def _versions() -> dict:
    return {"monoclust": __version__, "numpy": np.__version__, "python": platform.python_version()}


def emit_report(summary: Summary, output_dir, signtest_samples: Optional[int] = None) -> list:
    """Write summary tables, raw runs, sign tests and a manifest; return written paths.

    * ``summary_<measure>.csv`` - rows (dataset, fraction) plus ``Mean`` rows,
      one mean/std column pair per method; ``-`` marks a no-result cell
    * ``raw.csv`` - every run (no timings, so reruns are byte-identical);
      ``timings.csv`` holds wall-clock times
    * ``signtest_<measure>_<method>.json`` and ``cloud_<measure>_<method>.csv``
      - Bayesian sign test of each method (A) against pckm_mono (B), paired
      over (dataset, fraction) cell means
    * ``manifest.json`` - config, run seeds, library versions
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = summary.table.config
    methods = summary.methods
    written = []

    cell = {(c["dataset"], c["fraction"], c["method"]): c for c in summary.cells}
    keys = list(dict.fromkeys((c["dataset"], c["fraction"]) for c in summary.cells))
    grand = {(g["fraction"], g["method"]): g for g in summary.grand}
    fractions = list(dict.fromkeys(fr for _, fr in keys))
    for meas in MEASURES:
        header = ["dataset", "fraction"] + [f"{m}{sfx}" for m in methods for sfx in ("", "_std")]
        rows = []
        for ds, fr in keys:
            row = [ds, repr(fr)]
            for m in methods:
                c = cell.get((ds, fr, m))
                if c is None or c["no_result"]:
                    row += [NO_RESULT, NO_RESULT]
                else:
                    row += [repr(c[f"{meas}_mean"]), repr(c[f"{meas}_std"])]
            rows.append(row)
        for fr in fractions:
            row = ["Mean", repr(fr)]
            for m in methods:
                g = grand.get((fr, m))
                row += [NO_RESULT if g is None else repr(g[f"{meas}_mean"]), ""]
            rows.append(row)
        path = out / f"summary_{meas}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(path)

    summary.table.write_raw(out / "raw.csv")
    summary.table.write_timings(out / "timings.csv")
    written += [out / "raw.csv", out / "timings.csv"]

    n_samples = signtest_samples or (cfg.signtest_samples if cfg else 100_000)
    seed = cfg.seed if cfg else 0
    if REFERENCE_METHOD in methods:
        for mi, meas in enumerate(MEASURES):
            b = np.array([cell[(ds, fr, REFERENCE_METHOD)][f"{meas}_mean"] for ds, fr in keys])
            for oi, other in enumerate(m for m in methods if m != REFERENCE_METHOD):
                a = np.array([cell[(ds, fr, other)][f"{meas}_mean"] for ds, fr in keys])
                res = bayesian_sign_test(a, b, DEFAULT_ROPES[meas], n_samples, 1.0,
                                         np.random.default_rng([seed, mi, oi]))
                p_json = out / f"signtest_{meas}_{other}.json"
                p_cloud = out / f"cloud_{meas}_{other}.csv"
                res.write_summary(p_json)
                res.write_samples(p_cloud)
                written += [p_json, p_cloud]

    manifest = {
        "config": cfg.to_dict() if cfg else None,
        "run_seeds": cfg.run_seeds() if cfg else None,
        "versions": _versions(),
        "files": sorted(p.name for p in written),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    written.append(out / "manifest.json")
    return written

