import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from monoclust.stats import DEFAULT_ROPES, RopeInterval, bayesian_sign_test

N = 100_000


def test_all_equal_lands_in_rope():
    a = np.linspace(0, 1, 30)
    r = bayesian_sign_test(a, a, RopeInterval(-0.01, 0.01), N, rng=0)
    assert (r.n_left, r.n_rope, r.n_right) == (0, 30, 0)
    assert r.p_rope > 0.95


def test_unit_shift_lands_right():
    b = np.linspace(0, 1, 30)
    r = bayesian_sign_test(b + 1, b, RopeInterval(-0.01, 0.01), N, rng=0)
    assert r.p_right > 0.95


@pytest.mark.parametrize("counts,prior", [((3, 10, 17), 1.0), ((0, 0, 5), 1.0), ((8, 2, 8), 2.0), ((4, 0, 1), 0.5)])
def test_means_match_closed_form(counts, prior):
    nl, nr, ng = counts
    diff = np.r_[np.full(nl, -1.0), np.zeros(nr), np.full(ng, 1.0)]
    r = bayesian_sign_test(diff, np.zeros_like(diff), RopeInterval(-0.5, 0.5), N, prior, rng=3)
    m = diff.size
    expected = np.array([nl, nr + prior, ng]) / (m + prior)
    got = np.array([r.p_left, r.p_rope, r.p_right])
    assert np.all(np.abs(got - expected) < 3 / np.sqrt(N))


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(-1, 1)), st.data(), st.integers(0, 1000))
def test_antisymmetry(a, data, seed):
    b = data.draw(arrays(np.float64, a.shape, elements=st.floats(-1, 1)))
    rope = RopeInterval(-0.05, 0.02)
    fwd = bayesian_sign_test(a, b, rope, 2000, rng=seed)
    back = bayesian_sign_test(b, a, rope.mirrored(), 2000, rng=seed)
    assert (fwd.n_left, fwd.n_right) == (back.n_right, back.n_left)
    assert fwd.p_left == back.p_right and fwd.p_right == back.p_left
    assert fwd.p_rope == back.p_rope


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(1, 30), elements=st.floats(-1, 1)), st.integers(0, 1000))
def test_triplets_normalised(a, seed):
    r = bayesian_sign_test(a, np.zeros_like(a), RopeInterval(-0.1, 0.1), 500, rng=seed)
    assert abs(r.p_left + r.p_rope + r.p_right - 1) < 1e-9
    assert np.all(r.samples >= 0)
    assert np.all(np.abs(r.samples.sum(1) - 1) < 1e-9)


def test_shift_inside_rope_keeps_counts():
    b = np.linspace(0, 1, 20)
    a = b + 0.001
    rope = RopeInterval(-0.01, 0.01)
    one = bayesian_sign_test(a, b, rope, 100, rng=0)
    two = bayesian_sign_test(a + 0.002, b, rope, 100, rng=0)
    assert (one.n_left, one.n_rope, one.n_right) == (two.n_left, two.n_rope, two.n_right)


def test_rope_and_argument_validation():
    with pytest.raises(ValueError):
        RopeInterval(0.1, 0.2)
    with pytest.raises(ValueError):
        bayesian_sign_test([1, 2], [1], DEFAULT_ROPES["ari"])
    with pytest.raises(ValueError):
        bayesian_sign_test([], [], DEFAULT_ROPES["ari"])
    with pytest.raises(ValueError):
        bayesian_sign_test([1], [1], DEFAULT_ROPES["ari"], n_samples=0)
    assert DEFAULT_ROPES["ari"] == RopeInterval(-0.02, 0.02)
    assert DEFAULT_ROPES["nmi"] == DEFAULT_ROPES["unsat"] == RopeInterval(-0.01, 0.01)


def test_exports(tmp_path):
    r = bayesian_sign_test([0.1, 0.5, 0.2], [0.1, 0.1, 0.9], RopeInterval(-0.01, 0.01), 50, rng=1)
    r.write_summary(tmp_path / "s.json")
    r.write_samples(tmp_path / "c.csv")
    rec = json.loads((tmp_path / "s.json").read_text())
    assert set(rec) == {"p_left", "p_rope", "p_right", "n_left", "n_rope", "n_right"}
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "left,rope,right" and len(rows) == 51
    np.testing.assert_allclose(np.loadtxt(tmp_path / "c.csv", delimiter=",", skiprows=1), r.samples)


def test_seeded_reproducibility():
    a, b = np.random.default_rng(0).random((2, 25))
    r1 = bayesian_sign_test(a, b, RopeInterval(-0.01, 0.01), 1000, rng=5)
    r2 = bayesian_sign_test(a, b, RopeInterval(-0.01, 0.01), 1000, rng=5)
    np.testing.assert_array_equal(r1.samples, r2.samples)
