"""Synthetic dataset generation: shape, determinism, and the weight law."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import wmhash as wm

KS_CRIT = 1.9495  # alpha = 0.001, scaled by sqrt(n)


class TestGenParams:
    def test_nnz_per_doc_floors(self):
        assert wm.GenParams(1, 2000, 0.01).nnz_per_doc == 20
        assert wm.GenParams(1, 150, 0.01).nnz_per_doc == 1

    @pytest.mark.parametrize("kw", [
        dict(num_docs=0, num_features=10, density=0.5),
        dict(num_docs=1, num_features=0, density=0.5),
        dict(num_docs=1, num_features=10, density=0.0),
        dict(num_docs=1, num_features=10, density=1.5),
        dict(num_docs=1, num_features=10, density=0.05),  # nnz would be 0
        dict(num_docs=1, num_features=10, density=0.5, exponent=2.0),
        dict(num_docs=1, num_features=10, density=0.5, scale=0.0),
    ])
    def test_rejects(self, kw):
        with pytest.raises(wm.InvalidParams):
            wm.GenParams(**kw)


class TestGenerate:
    def test_shapes_and_support(self):
        params = wm.GenParams(num_docs=25, num_features=80, density=0.1, seed=3)
        docs = wm.generate(params)
        assert len(docs) == 25
        for s in docs:
            assert s.universe_size == 80
            assert len(s) == 8
            assert np.all(np.diff(s.indices.astype(np.int64)) > 0)
            assert s.indices.max() < 80
            assert np.all(s.weights > params.scale)

    def test_deterministic(self):
        params = wm.GenParams(num_docs=6, num_features=40, density=0.2, seed=9)
        d1, d2 = wm.generate(params), wm.generate(params)
        for a, b in zip(d1, d2):
            np.testing.assert_array_equal(a.indices, b.indices)
            np.testing.assert_array_equal(a.weights, b.weights)

    def test_docs_independent_of_count(self):
        base = dict(num_features=40, density=0.2, seed=9)
        five = wm.generate(wm.GenParams(num_docs=5, **base))
        ten = wm.generate(wm.GenParams(num_docs=10, **base))
        for a, b in zip(five, ten):
            np.testing.assert_array_equal(a.indices, b.indices)
            np.testing.assert_array_equal(a.weights, b.weights)

    def test_seed_changes_output(self):
        base = dict(num_docs=4, num_features=40, density=0.2)
        d1 = wm.generate(wm.GenParams(seed=1, **base))
        d2 = wm.generate(wm.GenParams(seed=2, **base))
        assert any(not np.array_equal(a.indices, b.indices)
                   or not np.array_equal(a.weights, b.weights)
                   for a, b in zip(d1, d2))

    def test_weights_follow_pareto_law(self):
        params = wm.GenParams(num_docs=200, num_features=100, density=0.5,
                              exponent=3.0, scale=0.2, seed=17)
        w = np.concatenate([s.weights for s in wm.generate(params)])
        assert len(w) == 10_000
        shape = params.exponent - 1.0
        cdf = lambda x: 1.0 - (params.scale / x) ** shape
        d = stats.kstest(w, cdf).statistic
        assert d < KS_CRIT / np.sqrt(len(w))

    def test_indices_uniform_over_universe(self):
        params = wm.GenParams(num_docs=2000, num_features=60, density=0.1, seed=21)
        counts = np.zeros(60)
        for s in wm.generate(params):
            counts[s.indices] += 1
        chi2 = stats.chisquare(counts).statistic
        assert chi2 < stats.chi2.ppf(0.999, df=59)

    @settings(max_examples=25, deadline=None)
    @given(num_docs=st.integers(1, 8), num_features=st.integers(5, 64),
           density=st.floats(0.2, 1.0), seed=st.integers(0, 2**32 - 1))
    def test_valid_sets_always(self, num_docs, num_features, density, seed):
        params = wm.GenParams(num_docs=num_docs, num_features=num_features,
                              density=density, seed=seed)
        docs = wm.generate(params)
        assert len(docs) == num_docs
        for s in docs:
            assert len(s) == params.nnz_per_doc
            assert len(np.unique(s.indices)) == len(s)
            assert s.indices.max() < num_features
            assert np.all(np.isfinite(s.weights)) and np.all(s.weights > 0)


class TestStats:
    def test_hand_example(self):
        a = wm.make_weighted_set(10, {0: 1.0, 1: 3.0})  # density .2, mean 2, std 1
        b = wm.make_weighted_set(10, {4: 2.0})          # density .1, mean 2, std 0
        density, mean_w, std_w = wm.stats([a, b])
        assert density == pytest.approx(0.15)
        assert mean_w == pytest.approx(2.0)
        assert std_w == pytest.approx(0.5)

    def test_empty(self):
        with pytest.raises(wm.EmptyDataset):
            wm.stats([])
