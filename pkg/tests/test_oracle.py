"""Tests for the exact moment identities and their Monte Carlo verifier.

The analytic formulas are cross-checked against exact rational arithmetic:
raw moments of r^2 follow the Beta(1/2, (n-2)/2) moment recursion, central
moments are derived from them by the binomial expansion, and the ratio-term
moments are checked at hand-reduced rational spot values.
"""

from fractions import Fraction

import pytest

from corrindep import (IDENTITIES, MomentCase, mao_centered_moment,
                       mao_second_moment_correction, mao_term_variance,
                       run_identity_suite, schott_centered_moments,
                       sphere_r2_moments, verify_moment_by_simulation)
from corrindep.errors import DomainError

RATIONAL_RTOL = 1e-12
N_GRID = (11, 12, 20, 50, 100)
SUITE_REPS = 20_000
SUITE_SEED = 3

ALL_IDENTITY_NAMES = {
    "r2_mean", "r2_second_moment", "r2_third_moment", "r2_fourth_moment",
    "r2_variance", "r2_cross_shared", "r2_cross_disjoint", "ratio_mean_zero",
    "ratio_variance", "ratio_two_pairs", "ratio_fourth_moment",
    "ratio_odd_cross",
}


def frac_c_moments(n):
    """Raw moments of r^2 as exact rationals.

    r^2 is Beta(1/2, (n-2)/2), whose k-th moment satisfies the recursion
    E X^k = E X^(k-1) * (a+k-1)/(a+b+k-1) with a = 1/2, a+b = (n-1)/2,
    i.e. a factor (2k-1)/(n-3+2k) per step.
    """
    c = []
    value = Fraction(1)
    for k in range(1, 5):
        value *= Fraction(2 * k - 1, n - 3 + 2 * k)
        c.append(value)
    return c


def frac_d_moments(n):
    """Central moments of r^2 from the raw ones by binomial expansion."""
    c1, c2, c3, c4 = frac_c_moments(n)
    d2 = c2 - c1 ** 2
    d3 = c3 - 3 * c1 * c2 + 2 * c1 ** 3
    d4 = c4 - 4 * c1 * c3 + 6 * c1 ** 2 * c2 - 3 * c1 ** 4
    return d2, d3, d4


def frac_all_equal(n):
    return Fraction(12 * (n - 3) * (5 * n * n - 27 * n + 40),
                    (n - 4) ** 4 * (n - 6) * (n - 8) * (n - 10))


def frac_two_pairs(n):
    return Fraction(4 * (n - 3) ** 2, (n - 4) ** 4 * (n - 6) ** 2)


def frac_term_variance(n):
    return Fraction(2 * (n - 3), (n - 4) ** 2 * (n - 6))


class TestMomentCase:
    def test_kind_validated(self):
        with pytest.raises(DomainError):
            MomentCase("three_equal", 20)

    def test_minimum_n_per_kind(self):
        with pytest.raises(DomainError):
            MomentCase("all_equal", 10)
        MomentCase("all_equal", 11)
        with pytest.raises(DomainError):
            MomentCase("two_pairs", 6)
        MomentCase("two_pairs", 7)
        MomentCase("otherwise", 3)


class TestMaoCenteredMoment:
    def test_dyadic_spot_values_at_n12(self):
        # at n = 12 both formulas reduce to dyadic rationals:
        # 12*9*(720-324+40) / (4096*6*4*2) = 981/4096 and
        # 4*81 / (4096*36) = 9/4096
        assert mao_centered_moment(MomentCase("all_equal", 12)) == 981 / 4096
        assert mao_centered_moment(MomentCase("two_pairs", 12)) == 9 / 4096

    @pytest.mark.parametrize("n", N_GRID)
    def test_matches_exact_rationals(self, n):
        got = mao_centered_moment(MomentCase("all_equal", n))
        assert got == pytest.approx(float(frac_all_equal(n)),
                                    rel=RATIONAL_RTOL)
        got = mao_centered_moment(MomentCase("two_pairs", n))
        assert got == pytest.approx(float(frac_two_pairs(n)),
                                    rel=RATIONAL_RTOL)

    def test_otherwise_is_zero(self):
        assert mao_centered_moment(MomentCase("otherwise", 15)) == 0.0

    @pytest.mark.parametrize("n", N_GRID)
    def test_two_pairs_is_squared_variance(self, n):
        assert mao_centered_moment(MomentCase("two_pairs", n)) == \
            pytest.approx(mao_term_variance(n) ** 2, rel=RATIONAL_RTOL)

    def test_all_equal_dominates_two_pairs(self):
        # fourth moment >= squared variance (Jensen), strictly here
        for n in N_GRID:
            assert (mao_centered_moment(MomentCase("all_equal", n))
                    > mao_centered_moment(MomentCase("two_pairs", n)))


class TestSphereR2Moments:
    @pytest.mark.parametrize("n", (3, 5, 11, 20, 100))
    def test_matches_beta_moment_recursion(self, n):
        got = sphere_r2_moments(n)
        want = [float(f) for f in frac_c_moments(n)]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=RATIONAL_RTOL)

    def test_moment_chain_decreases(self):
        c1, c2, c3, c4 = sphere_r2_moments(20)
        assert c1 > c2 > c3 > c4 > 0

    def test_cauchy_schwarz(self):
        for n in (3, 5, 11, 20, 100):
            c1, c2, _, _ = sphere_r2_moments(n)
            assert c2 >= c1 ** 2

    def test_domain(self):
        with pytest.raises(DomainError):
            sphere_r2_moments(2)


class TestSchottCenteredMoments:
    @pytest.mark.parametrize("n", (4, 5, 11, 20, 50, 100))
    def test_matches_binomial_expansion(self, n):
        got = schott_centered_moments(n)
        want = [float(f) for f in frac_d_moments(n)]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=RATIONAL_RTOL)

    def test_large_n_scaling(self):
        # d2 ~ 2/n^2, d3 ~ 8/n^3, d4 ~ 60/n^4
        n = 10 ** 6
        d2, d3, d4 = schott_centered_moments(n)
        assert n ** 2 * d2 == pytest.approx(2.0, rel=0.01)
        assert n ** 3 * d3 == pytest.approx(8.0, rel=0.01)
        assert n ** 4 * d4 == pytest.approx(60.0, rel=0.01)

    def test_positive(self):
        for n in (4, 11, 50):
            d2, d3, d4 = schott_centered_moments(n)
            assert d2 > 0 and d3 > 0 and d4 > 0


class TestTermVariance:
    @pytest.mark.parametrize("n", (7, 11, 20, 100))
    def test_matches_rational(self, n):
        assert mao_term_variance(n) == pytest.approx(
            float(frac_term_variance(n)), rel=RATIONAL_RTOL)

    def test_domain(self):
        with pytest.raises(DomainError):
            mao_term_variance(6)


class TestSecondMomentCorrection:
    def test_exact_at_p2(self):
        # -2*(2*2-1) / (3*2*1) = -1
        assert mao_second_moment_correction(2) == -1.0

    @pytest.mark.parametrize("p", (2, 3, 10, 100))
    def test_matches_rational(self, p):
        want = Fraction(-2 * (2 * p - 1), 3 * p * (p - 1))
        assert mao_second_moment_correction(p) == pytest.approx(
            float(want), rel=RATIONAL_RTOL)

    def test_large_p_asymptote(self):
        assert mao_second_moment_correction(10 ** 6) == pytest.approx(
            -4.0 / (3.0 * 10 ** 6), rel=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            mao_second_moment_correction(1)


class TestVerifyMomentBySimulation:
    def test_unknown_identity(self):
        with pytest.raises(DomainError):
            verify_moment_by_simulation("r2_tenth_moment")

    def test_n_below_identity_minimum(self):
        with pytest.raises(DomainError):
            verify_moment_by_simulation("ratio_fourth_moment", n=10,
                                        reps=1000)

    def test_reps_floor(self):
        with pytest.raises(DomainError):
            verify_moment_by_simulation("r2_mean", reps=50)

    def test_deterministic(self):
        a = verify_moment_by_simulation("r2_mean", n=15, reps=5000, seed=2)
        b = verify_moment_by_simulation("r2_mean", n=15, reps=5000, seed=2)
        assert a.empirical == b.empirical
        assert a.mc_se == b.mc_se

    def test_relative_check_fields(self):
        check = verify_moment_by_simulation("r2_mean", n=20, reps=50_000,
                                            seed=0)
        assert check.mode == "relative"
        assert check.analytic == pytest.approx(1.0 / 19.0, rel=1e-12)
        assert check.passed
        assert check.relative_error == check.error
        # tolerance was loosened (if needed) for the reduced draw count
        assert check.tolerance >= IDENTITIES["r2_mean"].tolerance

    def test_zero_mean_check_fields(self):
        check = verify_moment_by_simulation("ratio_mean_zero", n=20,
                                            reps=50_000, seed=0)
        assert check.mode == "absolute"
        assert check.analytic == 0.0
        assert check.tolerance == pytest.approx(3.0 * check.mc_se)
        assert check.relative_error is None

    def test_to_dict_keys(self):
        check = verify_moment_by_simulation("r2_mean", n=20, reps=5000,
                                            seed=0)
        assert set(check.to_dict()) == {
            "identity", "n", "replications", "seed", "analytic", "empirical",
            "mc_se", "mode", "error", "tolerance", "passed"}


class TestRunIdentitySuite:
    def test_reduced_suite_passes(self):
        checks = run_identity_suite(n=20, reps=SUITE_REPS, seed=SUITE_SEED)
        assert [c.identity for c in checks] == sorted(ALL_IDENTITY_NAMES)
        assert all(c.passed for c in checks)

    def test_registry_names(self):
        assert set(IDENTITIES) == ALL_IDENTITY_NAMES
