import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import varform as vf
from varform import DataError, DimensionError, SizeError

from oracles import dcov_unbiased_brute, distance_matrix_brute, u_center_brute


def _stat(x, e):
    a = vf.u_center(vf.pairwise_distances(x))
    b = vf.u_center(vf.pairwise_distances(e))
    return vf.dcov_unbiased(a, b)


class TestPairwiseDistances:
    def test_three_four_five(self):
        d = vf.pairwise_distances(np.array([[0.0, 0.0], [3.0, 4.0]]))
        np.testing.assert_allclose(d, [[0.0, 5.0], [5.0, 0.0]])

    def test_single_point(self):
        np.testing.assert_array_equal(
            vf.pairwise_distances(np.array([[2.0, 7.0]])), [[0.0]]
        )

    def test_scalar_rows(self):
        d = vf.pairwise_distances(np.array([1.0, 4.0, 6.0]))
        np.testing.assert_allclose(d, [[0, 3, 5], [3, 0, 2], [5, 2, 0]])

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            vf.pairwise_distances(np.array([[1.0], [np.nan]]))

    def test_empty_rejected(self):
        with pytest.raises(SizeError):
            vf.pairwise_distances(np.empty((0, 2)))

    @given(st.integers(0, 10**6), st.integers(3, 10), st.integers(1, 3))
    def test_triangle_inequality_on_sampled_triples(self, seed, n, q):
        rng = np.random.default_rng(seed)
        d = vf.pairwise_distances(rng.standard_normal((n, q)))
        np.testing.assert_allclose(d, d.T)
        idx = rng.integers(0, n, size=(10, 3))
        for i, j, k in idx:
            assert d[i, k] <= d[i, j] + d[j, k] + 1e-9

    @given(st.integers(0, 10**6), st.integers(2, 8), st.integers(1, 3))
    def test_matches_brute_force(self, seed, n, q):
        pts = np.random.default_rng(seed).standard_normal((n, q))
        np.testing.assert_allclose(
            vf.pairwise_distances(pts), distance_matrix_brute(pts), atol=1e-12
        )


class TestUCenter:
    def test_small_size_rejected(self):
        with pytest.raises(SizeError):
            vf.u_center(np.zeros((2, 2)))

    def test_all_zero_distances(self):
        np.testing.assert_array_equal(vf.u_center(np.zeros((5, 5))), np.zeros((5, 5)))

    @given(st.integers(0, 10**6), st.integers(3, 12))
    def test_off_diagonal_row_sums_vanish(self, seed, n):
        pts = np.random.default_rng(seed).standard_normal((n, 2))
        a = vf.u_center(vf.pairwise_distances(pts))
        np.testing.assert_allclose(a, a.T, atol=1e-10)
        np.testing.assert_array_equal(np.diag(a), np.zeros(n))
        assert np.abs(a.sum(axis=1)).max() < n * 1e-10

    @given(st.integers(0, 10**6), st.floats(0.1, 50.0))
    def test_homogeneous_in_scale(self, seed, c):
        d = vf.pairwise_distances(np.random.default_rng(seed).standard_normal((6, 2)))
        np.testing.assert_allclose(vf.u_center(c * d), c * vf.u_center(d), rtol=1e-10)

    @given(st.integers(0, 10**6), st.integers(3, 8))
    def test_matches_entrywise_brute_force(self, seed, n):
        pts = np.random.default_rng(seed).standard_normal((n, 2))
        d = vf.pairwise_distances(pts)
        np.testing.assert_allclose(
            vf.u_center(d), u_center_brute(d.tolist()), atol=1e-10
        )


class TestDcovUnbiased:
    def test_constant_sample_gives_zero(self, rng):
        x = rng.standard_normal((6, 2))
        e = np.full(6, 3.14)
        assert _stat(x, e) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            vf.dcov_unbiased(np.zeros((5, 5)), np.zeros((6, 6)))

    def test_minimum_size(self):
        with pytest.raises(SizeError):
            vf.dcov_unbiased(np.zeros((3, 3)), np.zeros((3, 3)))

    def test_negative_value_fixed_seed(self):
        # Guards against accidental clamping of the estimator at zero.
        rng = np.random.default_rng(0)
        x = rng.standard_normal((6, 1))
        e = rng.standard_normal(6)
        value = _stat(x, e)
        assert value < -1e-3
        np.testing.assert_allclose(value, -0.03561034381060979, rtol=1e-12)

    @given(st.integers(0, 10**6), st.sampled_from([4, 5, 6, 8]), st.integers(1, 3))
    def test_matches_brute_force_expansion(self, seed, n, q):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((n, q))
        e = rng.standard_normal(n)
        np.testing.assert_allclose(
            _stat(x, e), dcov_unbiased_brute(x, e), atol=1e-12
        )

    @given(st.integers(0, 10**6), st.integers(4, 10))
    def test_permutation_invariance(self, seed, n):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((n, 2))
        e = rng.standard_normal(n)
        perm = rng.permutation(n)
        np.testing.assert_allclose(
            _stat(x, e), _stat(x[perm], e[perm]), atol=1e-10
        )

    @given(st.integers(0, 10**6), st.floats(0.05, 20.0), st.floats(0.05, 20.0))
    def test_scale_equivariance(self, seed, cx, ce):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((7, 2))
        e = rng.standard_normal(7)
        np.testing.assert_allclose(
            _stat(cx * x, ce * e), cx * ce * _stat(x, e), rtol=1e-9, atol=1e-12
        )

    @given(st.integers(0, 10**6))
    def test_translation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((7, 2))
        e = rng.standard_normal(7)
        shift_x = x + np.array([13.0, -4.5])
        np.testing.assert_allclose(
            _stat(shift_x, e + 99.0), _stat(x, e), atol=1e-10
        )

    def test_mean_near_zero_under_independence(self):
        # Small-scale unbiasedness check; the acceptance suite runs the
        # full 10,000-replication version.
        spec = vf.RngSpec(2024)
        values = np.empty(1500)
        for r in range(values.size):
            rng = spec.stream("unbias-unit", r)
            values[r] = _stat(rng.standard_normal((10, 1)), rng.standard_normal(10))
        se = values.std(ddof=1) / np.sqrt(values.size)
        assert abs(values.mean()) < 3 * se


class TestPopulationOracle:
    @staticmethod
    def _independent(rng, m):
        return rng.standard_normal(m), rng.standard_normal(m)

    @staticmethod
    def _identical(rng, m):
        z = rng.standard_normal(m)
        return z, z

    def test_minimum_sample_size(self):
        with pytest.raises(vf.ConfigurationError):
            vf.dcov_population_oracle(self._independent, m=10, seed=1)

    def test_independent_near_zero(self):
        estimates = np.array(
            [
                vf.dcov_population_oracle(self._independent, m=4000, seed=s)
                for s in range(5)
            ]
        )
        se = estimates.std(ddof=1) / np.sqrt(estimates.size)
        assert abs(estimates.mean()) < 3 * se + 1e-12

    def test_dependent_positive(self):
        assert vf.dcov_population_oracle(self._identical, m=4000, seed=3) > 0.05

    def test_estimator_mean_matches_oracle_for_identical_pair(self):
        oracle_runs = np.array(
            [
                vf.dcov_population_oracle(self._identical, m=4000, seed=s)
                for s in range(5)
            ]
        )
        spec = vf.RngSpec(77)
        reps = 300
        values = np.empty(reps)
        for r in range(reps):
            rng = spec.stream("oracle-vs-estimator", r)
            z = rng.standard_normal(50)
            values[r] = _stat(z, z)
        se_est = values.std(ddof=1) / np.sqrt(reps)
        se_oracle = oracle_runs.std(ddof=1) / np.sqrt(oracle_runs.size)
        gap = abs(values.mean() - oracle_runs.mean())
        assert gap < 3 * np.hypot(se_est, se_oracle)
