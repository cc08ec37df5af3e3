"""Command-line entry point: ``monoclust {run,metrics,signtest,synth}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bench import ExperimentConfig, aggregate, emit_report, load_dataset, make_synthetic, run_experiment
from .clustering import ClusteringOutcome
from .constraints import load_constraints, unsat
from .data import write_csv
from .metrics import ari, nmi_index, nmi_pairwise
from .stats import RopeInterval, bayesian_sign_test

log = logging.getLogger("monoclust")


def _cmd_run(args) -> int:
    base = {}
    base_dir = Path(".")
    if args.config:
        base = json.loads(Path(args.config).read_text())
        if "config" in base and "datasets" not in base:
            base = base["config"]
        base_dir = Path(args.config).parent
    overrides = {
        "datasets": args.datasets, "fractions": args.fractions, "methods": args.methods,
        "repeats": args.repeats, "seed": args.seed, "penalty_weight": args.penalty_weight,
        "max_iter": args.max_iter, "signtest_samples": args.signtest_samples, "jobs": args.jobs,
        "out": args.out,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if args.fixed_constraints:
        base["fixed_constraints"] = True
    if args.datasets:
        base_dir = Path(".")
    cfg = ExperimentConfig.from_dict(base)
    if not cfg.out:
        raise ValueError("no output directory (--out or 'out' in the config)")
    table = run_experiment(cfg, base_dir)
    written = emit_report(aggregate(table), cfg.out)
    log.info("wrote %d files to %s", len(written), cfg.out)
    return 0


def _read_labels(path) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".json":
        oc = ClusteringOutcome.from_dict(json.loads(path.read_text()))
        if oc.partition is None:
            raise ValueError(f"{path} holds a {oc.status} outcome without a partition")
        return oc.partition.labels
    with path.open() as fh:
        return np.array([int(line.strip()) for line in fh if line.strip()])


def _cmd_metrics(args) -> int:
    d = load_dataset({"path": args.data, "label_column": args.label_column})
    labels = _read_labels(args.partition)
    if labels.shape != (d.n,):
        raise ValueError(f"partition has {labels.size} labels, dataset has {d.n} rows")
    res = {"nmi": nmi_index(labels, d), "nmi_pairwise": nmi_pairwise(labels, d)}
    if d.labels is not None:
        res["ari"] = ari(d.labels, labels)
    if args.constraints:
        cs, _ = load_constraints(args.constraints)
        res["unsat"] = unsat(labels, cs)
    print(json.dumps(res, indent=2, sort_keys=True))
    return 0


def _read_column(path, column):
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    try:
        float(rows[0][0])
        header = None
    except ValueError:
        header = rows.pop(0)
    idx = 0 if column is None else (header.index(column) if header else int(column))
    return np.array([float(r[idx]) for r in rows if r])


def _cmd_signtest(args) -> int:
    a = _read_column(args.a, args.column)
    b = _read_column(args.b, args.column)
    res = bayesian_sign_test(a, b, RopeInterval(*args.rope), args.samples, args.prior, args.seed)
    if args.cloud:
        res.write_samples(args.cloud)
    if args.summary:
        res.write_summary(args.summary)
    print(json.dumps(res.summary(), indent=2))
    return 0


def _cmd_synth(args) -> int:
    d = make_synthetic(args.n, args.u, args.k, args.noise, args.seed)
    write_csv(d, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monoclust", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment matrix and write a report")
    r.add_argument("--config", help="JSON experiment config (a report manifest also works)")
    r.add_argument("--datasets", nargs="+")
    r.add_argument("--fractions", nargs="+", type=float)
    r.add_argument("--methods", nargs="+")
    r.add_argument("--repeats", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--penalty-weight", type=float)
    r.add_argument("--max-iter", type=int)
    r.add_argument("--signtest-samples", type=int)
    r.add_argument("--jobs", type=int)
    r.add_argument("--fixed-constraints", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=_cmd_run)

    m = sub.add_parser("metrics", help="evaluate a stored partition")
    m.add_argument("--data", required=True, help="CSV (header, labels in --label-column) or KEEL .dat")
    m.add_argument("--label-column", type=int, default=-1)
    m.add_argument("--partition", required=True, help="outcome JSON or one label per line")
    m.add_argument("--constraints", help="constraint CSV (i,j,type)")
    m.set_defaults(func=_cmd_metrics)

    s = sub.add_parser("signtest", help="Bayesian sign test of two paired result files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--column", help="column name (or index when headerless); default first")
    s.add_argument("--rope", nargs=2, type=float, default=(-0.01, 0.01), metavar=("MIN", "MAX"))
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--prior", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cloud", help="write barycentric samples CSV here")
    s.add_argument("--summary", help="write summary JSON here")
    s.set_defaults(func=_cmd_signtest)

    y = sub.add_parser("synth", help="write a synthetic monotone dataset")
    y.add_argument("--n", type=int, required=True)
    y.add_argument("--u", type=int, required=True)
    y.add_argument("--k", type=int, required=True)
    y.add_argument("--noise", type=float, default=0.0)
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--out", required=True)
    y.set_defaults(func=_cmd_synth)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - any failure maps to a nonzero exit
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
