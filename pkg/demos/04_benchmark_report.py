"""A small benchmark run: repeated runs, aggregation and the report files.

Run: python demos/04_benchmark_report.py [output_dir]
"""

import sys

from monoclust.bench import ExperimentConfig, aggregate, emit_report, run_experiment

out = sys.argv[1] if len(sys.argv) > 1 else "demo_report"
cfg = ExperimentConfig(
    datasets=[
        {"synthetic": {"n": 300, "u": 4, "k": 4, "noise": 0.1, "seed": 3}, "name": "syn300"},
        {"synthetic": {"n": 400, "u": 2, "k": 3, "noise": 0.05, "seed": 8}, "name": "syn400"},
    ],
    fractions=(0.10, 0.15),
    repeats=5,
    seed=0,
    signtest_samples=20_000,
)
table = run_experiment(cfg)
summary = aggregate(table)
print(f"{len(table)} runs")
for g in summary.grand:
    print(f"  fraction {g['fraction']:.2f} {g['method']:<12} ARI {g['ari_mean']:.3f} "
          f"NMI {g['nmi_mean']:.3f} Unsat {g['unsat_mean']:.3f}")

written = emit_report(summary, out)
print(f"\nwrote {len(written)} files to {out}/, e.g.:")
for p in written[:6]:
    print("  ", p.name)
# rerunning from the manifest reproduces every file except timings.csv
print(f"rerun with: monoclust run --config {out}/manifest.json --out {out}_again")
