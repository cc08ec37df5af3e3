"""Monotonic constrained clustering: PCKM-Mono and baselines, metrics, sign test."""

__version__ = "0.1.0"

from .data import Dataset, Partition, load_csv, load_keel, write_csv, standardize, knn_impute
from .preference import preference, weighted_l1, mono_distance, dominates, projection
from .constraints import (ConstraintSet, constraint_count, generate_constraints, violation_count, unsat,
                          save_constraints, load_constraints)
from .clustering import (EMConfig, ClusteringOutcome, init_centroids, pckm_mono, mono_kmeans,
                         kmeans, cop_kmeans, pck_means, order_clusters, objective, run_method)
from .metrics import ari, nmi_index, nmi_pairwise
from .stats import DEFAULT_ROPES, RopeInterval, SignTestResult, bayesian_sign_test
