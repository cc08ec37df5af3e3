import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from monoclust.data import Dataset
from monoclust.metrics import ari, contingency, nmi_index, nmi_pairwise

from oracles import brute_nmi, pair_count_ari

labels_st = st.integers(2, 40).flatmap(
    lambda n: st.tuples(arrays(np.int64, n, elements=st.integers(0, 4)),
                        arrays(np.int64, n, elements=st.integers(0, 4))))


def test_ari_examples():
    assert ari([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0
    assert ari([1, 1, 2, 2], [2, 2, 1, 1]) == 1.0
    got = ari([1, 1, 2, 2], [1, 2, 1, 2])
    assert abs(got - pair_count_ari([1, 1, 2, 2], [1, 2, 1, 2])) < 1e-12
    assert got == pytest.approx(-0.5)


def test_ari_errors():
    with pytest.raises(ValueError):
        ari([0, 1], [0, 1, 1])
    with pytest.raises(ValueError):
        ari([0], [0])


def test_ari_degenerate_single_cluster():
    assert ari([0, 0, 0], [5, 5, 5]) == 1.0


def test_contingency_table():
    np.testing.assert_array_equal(contingency([0, 0, 1, 1], [3, 4, 4, 4]), [[1, 1], [0, 2]])


@settings(max_examples=60, deadline=None)
@given(labels_st)
def test_ari_matches_pair_counting(ab):
    a, b = ab
    assert abs(ari(a, b) - pair_count_ari(a, b)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(labels_st, st.permutations(range(5)))
def test_ari_symmetry_and_relabelling(ab, perm):
    a, b = ab
    assert ari(a, b) == ari(b, a)
    assert ari(a, a) == 1.0
    assert ari(np.array(perm)[a], b) == ari(a, b)
    assert -1.0 <= ari(a, b) <= 1.0


def test_nmi_two_points():
    d = Dataset(np.array([[1.0], [2.0]]))
    assert nmi_index([1, 0], d) == 1.0
    assert nmi_index([0, 1], d) == 0.0
    assert nmi_pairwise([1, 0], d) == 1.0


def test_nmi_ignores_incomparable_pairs():
    d = Dataset(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert nmi_index([1, 0], d) == 0.0
    assert nmi_pairwise([1, 0], d) == 0.0


def test_nmi_equal_vectors_different_labels_clash():
    X = np.array([[1.0, 1.0], [1.0, 1.0], [5.0, 5.0]])
    assert nmi_index([0, 1, 2], X) == pytest.approx(2 / 3)


def test_nmi_only_counts_instances_once():
    # one dominating instance clashes with three others: 4 of 5 instances
    X = np.array([[10.0], [1.0], [2.0], [3.0], [-5.0]])
    assert nmi_index([0, 1, 1, 1, 0], X) == pytest.approx(4 / 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(1, 3), st.integers(1, 4), st.integers(0, 10_000))
def test_nmi_matches_brute_force(n, u, m, seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 4, (n, u)).astype(float)  # small grid: many ties and comparabilities
    lab = rng.integers(0, m, n)
    assert nmi_index(lab, X) == pytest.approx(brute_nmi(lab.tolist(), X.tolist()), abs=1e-15)


def test_nmi_chunking_matches_oracle():
    rng = np.random.default_rng(4)
    X = rng.integers(0, 5, (600, 2)).astype(float)
    lab = rng.integers(0, 3, 600)
    assert nmi_index(lab, X) == brute_nmi(lab.tolist(), X.tolist())


def brute_pairwise(labels, X):
    comp = bad = 0
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            ij, ji = np.all(X[i] >= X[j]), np.all(X[j] >= X[i])
            if ij or ji:
                comp += 1
                bad += (ij and labels[i] < labels[j]) or (ji and labels[j] < labels[i])
    return bad / comp if comp else 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.integers(1, 3), st.integers(0, 10_000))
def test_nmi_pairwise_matches_brute_force(n, u, seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 3, (n, u)).astype(float)
    lab = rng.integers(0, 3, n)
    assert nmi_pairwise(lab, X) == pytest.approx(brute_pairwise(lab, X), abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60), st.integers(1, 4), st.integers(0, 10_000))
def test_monotone_function_of_projection_is_zero(n, u, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, u))
    lab = np.digitize(X.sum(1), np.sort(rng.normal(size=3)))
    assert nmi_index(lab, X) == 0.0


def test_nmi_length_mismatch():
    with pytest.raises(ValueError):
        nmi_index([0, 1], np.zeros((3, 1)))
