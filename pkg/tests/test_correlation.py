"""Tests for sample correlations and the exact null (sphere) samplers."""

import numpy as np
import pytest

from corrindep import (correlation_summary, pair_indices,
                       sample_null_correlations,
                       sample_null_correlations_batch)
from corrindep.correlation import _unit_rows
from corrindep.errors import (DegenerateColumnError, DomainError,
                              SampleSizeError)

from _gof import ks_two_sample

EXACT_ATOL = 1e-14
CORRCOEF_ATOL = 1e-12
UNIT_NORM_ATOL = 1e-12
KS_LIMIT = 0.03


def _pearson_pairs(samples):
    """Straightforward textbook Pearson r for a (reps, n, 2) stack."""
    xc = samples - samples.mean(axis=1, keepdims=True)
    c0, c1 = xc[..., 0], xc[..., 1]
    return ((c0 * c1).sum(axis=1)
            / np.sqrt((c0 * c0).sum(axis=1) * (c1 * c1).sum(axis=1)))


class TestCorrelationSummary:
    def test_hand_example(self):
        # columns (1,2,3) and (1,3,2): centered (-1,0,1) and (-1,1,0),
        # cross product 1, each sum of squares 2, so r = 1/2 exactly
        data = np.array([[1.0, 1.0], [2.0, 3.0], [3.0, 2.0]])
        corr = correlation_summary(data)
        assert corr.n == 3
        assert corr.p == 2
        assert corr.pair_count == 1
        assert corr.offdiag[0] == pytest.approx(0.5, abs=EXACT_ATOL)

    def test_identical_columns_snap_to_one(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(25)
        data = np.column_stack([x, x])
        assert correlation_summary(data).offdiag[0] == 1.0

    def test_affine_copy_snaps_to_minus_one(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(25)
        data = np.column_stack([x, -3.0 * x + 7.0])
        assert correlation_summary(data).offdiag[0] == -1.0

    def test_location_scale_invariance(self):
        rng = np.random.default_rng(2)
        data = rng.standard_normal((40, 6))
        scaled = data * 3.7 - 5.0
        a = correlation_summary(data).offdiag
        b = correlation_summary(scaled).offdiag
        assert np.allclose(a, b, atol=CORRCOEF_ATOL, rtol=0.0)

    def test_matches_corrcoef_in_tril_order(self):
        rng = np.random.default_rng(3)
        data = rng.standard_normal((20, 5))
        want = np.corrcoef(data, rowvar=False)[np.tril_indices(5, -1)]
        got = correlation_summary(data).offdiag
        assert np.allclose(got, want, atol=CORRCOEF_ATOL, rtol=0.0)

    def test_constant_column_raises_with_index(self):
        rng = np.random.default_rng(4)
        data = rng.standard_normal((15, 3))
        data[:, 1] = 2.5
        with pytest.raises(DegenerateColumnError) as info:
            correlation_summary(data)
        assert info.value.column == 1

    def test_rounding_noise_column_raises(self):
        # spacing far below one ulp of the offset: the centered sum of
        # squares is pure float noise and must not become a correlation
        rng = np.random.default_rng(5)
        data = rng.standard_normal((20, 3))
        data[:, 2] = 1e9 + np.linspace(0.0, 1e-7, 20)
        with pytest.raises(DegenerateColumnError):
            correlation_summary(data)

    def test_non_finite_rejected(self):
        data = np.ones((10, 3)) + np.arange(30).reshape(10, 3)
        data[4, 1] = np.nan
        with pytest.raises(DomainError):
            correlation_summary(data)

    def test_too_few_rows(self):
        with pytest.raises(SampleSizeError):
            correlation_summary(np.ones((2, 4)) + np.arange(8).reshape(2, 4))

    def test_single_column_rejected(self):
        with pytest.raises(DomainError):
            correlation_summary(np.arange(12.0).reshape(12, 1))

    def test_1d_rejected(self):
        with pytest.raises(DomainError):
            correlation_summary(np.arange(12.0))

    def test_values_never_exceed_one(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            corr = correlation_summary(rng.standard_normal((5, 4)))
            assert np.all(np.abs(corr.offdiag) <= 1.0)

    def test_offdiag_length_validated(self):
        from corrindep import CorrelationSummary
        with pytest.raises(DomainError):
            CorrelationSummary(n=10, p=3, offdiag=np.zeros(2))


class TestPairIndices:
    def test_matches_tril_indices(self):
        for p in (2, 3, 5, 8):
            low, high = pair_indices(p)
            want_low, want_high = np.tril_indices(p, -1)
            assert np.array_equal(low, want_low)
            assert np.array_equal(high, want_high)

    def test_first_pairs(self):
        # order is (2,1), (3,1), (3,2), (4,1), ... in 1-based labels
        low, high = pair_indices(4)
        assert list(zip(low, high)) == [(1, 0), (2, 0), (2, 1),
                                        (3, 0), (3, 1), (3, 2)]


class TestNullSampler:
    def test_unit_norms(self):
        rng = np.random.default_rng(7)
        w = _unit_rows(rng.standard_normal((50, 9)))
        norms = np.sqrt((w * w).sum(axis=1))
        assert np.all(np.abs(norms - 1.0) <= UNIT_NORM_ATOL)

    def test_reproducible_with_int_seed(self):
        a = sample_null_correlations(10, 3, rng=123)
        b = sample_null_correlations(10, 3, rng=123)
        assert np.array_equal(a.offdiag, b.offdiag)

    def test_int_seed_matches_generator(self):
        a = sample_null_correlations(10, 3, rng=123)
        b = sample_null_correlations(10, 3, rng=np.random.default_rng(123))
        assert np.array_equal(a.offdiag, b.offdiag)

    def test_batch_matches_single_draws(self):
        batch = sample_null_correlations_batch(10, 3, 5,
                                               rng=np.random.default_rng(9))
        gen = np.random.default_rng(9)
        for r in range(5):
            single = sample_null_correlations(10, 3, rng=gen)
            assert np.array_equal(batch[r], single.offdiag)

    def test_shapes_and_range(self):
        batch = sample_null_correlations_batch(12, 4, 100, rng=11)
        assert batch.shape == (100, 6)
        assert np.all(np.abs(batch) <= 1.0)

    def test_mean_r2_matches_null_moment(self):
        # E r^2 = 1/(n-1) under the null; 1e5 draws at n=10 gives a Monte
        # Carlo standard error of about 4.2e-4
        n, reps = 10, 100_000
        off = sample_null_correlations_batch(n, 2, reps, rng=13)[:, 0]
        d2 = 2.0 * (n - 2) / ((n - 1.0) ** 2 * (n + 1.0))
        se = np.sqrt(d2 / reps)
        assert abs(np.mean(off ** 2) - 1.0 / (n - 1)) < 3.0 * se

    def test_domain_errors(self):
        with pytest.raises(SampleSizeError):
            sample_null_correlations(2, 3, rng=0)
        with pytest.raises(DomainError):
            sample_null_correlations(10, 1, rng=0)


class TestTwoPathAgreement:
    """The sphere representation must reproduce the data-matrix law of r."""

    def test_distribution_ks(self):
        n, reps = 10, 20_000
        rng = np.random.default_rng(17)
        r_data = _pearson_pairs(rng.standard_normal((reps, n, 2)))
        r_sphere = sample_null_correlations_batch(n, 2, reps, rng=19)[:, 0]
        assert ks_two_sample(r_data, r_sphere) < KS_LIMIT

    @pytest.mark.parametrize("n", [10, 30])
    def test_moments_match_analytic(self, n):
        reps = 10_000
        rng = np.random.default_rng(23)
        r2 = _pearson_pairs(rng.standard_normal((reps, n, 2))) ** 2
        c1 = 1.0 / (n - 1)
        d2 = 2.0 * (n - 2) / ((n - 1.0) ** 2 * (n + 1.0))
        assert abs(r2.mean() - c1) < 3.0 * np.sqrt(d2 / reps)
        # second moment: SE estimated from the sample itself
        c2 = 3.0 / ((n - 1.0) * (n + 1.0))
        se2 = np.sqrt(np.var(r2 ** 2, ddof=1) / reps)
        assert abs(np.mean(r2 ** 2) - c2) < 3.0 * se2
