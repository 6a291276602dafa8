"""Tests for rejection thresholds, p-values, and level-alpha decisions.

Frozen threshold and p-value references are 40-digit mpmath evaluations of
the closed forms (tools/gen_stat_reference.py).
"""

import math

import numpy as np
import pytest

from corrindep import (CorrelationSummary, DecisionReport, TEST_NAMES,
                       chisq_calibrated_mao, chisq_calibrated_schott,
                       chisq_quantile, decide, decide_all, p_value,
                       region_T_c, region_T_star, region_t_c, region_t_star,
                       sample_null_correlations, statistic_report, threshold)
from corrindep.errors import DomainError, SampleSizeError

FROZEN_RTOL = 1e-12
EQUIV_TUPLES = 10_000


def _report(n, p, values):
    return statistic_report(
        CorrelationSummary(n=n, p=p, offdiag=np.asarray(values, dtype=float)))


class TestThresholds:
    def test_frozen_values_n10_p3(self):
        assert region_t_star(10, 3, 0.05) == pytest.approx(
            0.71510968502658697, rel=FROZEN_RTOL)
        assert region_T_star(10, 3, 0.05) == pytest.approx(
            1.3883224869256824, rel=FROZEN_RTOL)
        assert region_t_c(10, 3, 0.05) == pytest.approx(
            0.78955708356911012, rel=FROZEN_RTOL)
        assert region_T_c(10, 3, 0.05) == pytest.approx(
            1.5615477218705064, rel=FROZEN_RTOL)

    def test_frozen_values_n30_p10(self):
        assert region_t_star(30, 10, 0.01) == pytest.approx(
            2.2749868636124102, rel=FROZEN_RTOL)
        assert region_T_star(30, 10, 0.01) == pytest.approx(
            2.6310932282885952, rel=FROZEN_RTOL)
        assert region_t_c(30, 10, 0.01) == pytest.approx(
            2.3696042117633639, rel=FROZEN_RTOL)
        assert region_T_c(30, 10, 0.01) == pytest.approx(
            2.7488737610012347, rel=FROZEN_RTOL)

    def test_dispatch_matches_functions(self):
        for name, fn in (("t_star", region_t_star), ("T_star", region_T_star),
                         ("t_c", region_t_c), ("T_c", region_T_c)):
            assert threshold(name, 15, 4, 0.05) == fn(15, 4, 0.05)

    def test_unknown_test_rejected(self):
        with pytest.raises(DomainError):
            threshold("z_test", 15, 4, 0.05)

    def test_constant_term_signs(self):
        # the chi-square regions rearrange the calibrated statistic back to
        # the raw scale; the additive constant is negative for the ratio test
        # (since sqrt((n-3)/(n-6)) > 1) and positive for the plain test
        n, p, alpha = 10, 3, 0.05
        q = chisq_quantile(alpha, p * (p - 1) / 2.0)
        assert region_T_c(n, p, alpha) < q * math.sqrt((n - 3.0) / (n - 6.0)) / (n - 4.0)
        assert region_t_c(n, p, alpha) > q * math.sqrt((n - 2.0) / (n + 1.0)) / (n - 1.0)

    def test_monotone_decreasing_in_alpha(self):
        alphas = (0.01, 0.05, 0.10, 0.25)
        for fn in (region_t_star, region_T_star, region_t_c, region_T_c):
            values = [fn(20, 6, a) for a in alphas]
            assert np.all(np.diff(values) < 0)

    def test_normal_region_at_half_is_null_mean(self):
        # z_{0.5} = 0, so the alpha = 1/2 normal-calibration threshold sits
        # exactly at the null mean
        n, p = 25, 6
        assert region_t_star(n, p, 0.5) == pytest.approx(
            p * (p - 1) / (2.0 * (n - 1)), rel=1e-14)
        assert region_T_star(n, p, 0.5) == pytest.approx(
            p * (p - 1) / (2.0 * (n - 4)), rel=1e-14)

    def test_large_n_ratio_region_approaches_quantile(self):
        # as n grows, (n-4) * region_T_c converges to the chi-square quantile
        n, p, alpha = 1_000_000, 3, 0.05
        q = chisq_quantile(alpha, 3)
        assert (n - 4) * region_T_c(n, p, alpha) == pytest.approx(q, rel=1e-4)
        assert (n - 1) * region_t_c(n, p, alpha) == pytest.approx(q, rel=1e-4)

    def test_small_n_errors(self):
        with pytest.raises(SampleSizeError):
            region_T_star(6, 3, 0.05)
        with pytest.raises(SampleSizeError):
            region_T_c(6, 3, 0.05)
        region_t_star(3, 3, 0.05)  # plain normal form needs only n >= 3

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            region_t_star(10, 3, 0.0)
        with pytest.raises(DomainError):
            region_t_star(10, 3, 1.0)


class TestPValue:
    def test_frozen_values(self):
        # spot checks at exactly known calibrated values
        from corrindep.statistics import StatisticReport
        spot = StatisticReport(n=10, p=3, t=0.5, tau_sq=0.053872053872053872,
                               t_star=0.71807033081725358,
                               t_c=4.7589059099337861, T=0.6,
                               sigma_sq=0.29166666666666667,
                               T_star=0.18516401995451029,
                               T_c=3.4535573676110727)
        assert p_value("t_star", spot) == pytest.approx(
            0.23635696136752947, rel=1e-9)
        assert p_value("T_star", spot) == pytest.approx(
            0.42655019448950438, rel=1e-9)
        assert p_value("t_c", spot) == pytest.approx(
            0.1903267658618546, rel=1e-9)
        assert p_value("T_c", spot) == pytest.approx(
            0.3268357161775809, rel=1e-9)

    def test_in_unit_interval(self):
        rep = _report(12, 4, [0.4, -0.2, 0.1, 0.0, 0.3, -0.1])
        for name in TEST_NAMES:
            assert 0.0 < p_value(name, rep) < 1.0

    def test_decreasing_in_statistic(self):
        lows = _report(20, 4, [0.1, 0.0, 0.1, 0.0, 0.1, 0.0])
        highs = _report(20, 4, [0.5, 0.4, 0.5, 0.4, 0.5, 0.4])
        for name in TEST_NAMES:
            assert p_value(name, highs) < p_value(name, lows)

    def test_unavailable_statistic_raises(self):
        rep = _report(20, 3, [1.0, 0.0, 0.0])
        with pytest.raises(DomainError):
            p_value("T_star", rep)


class TestDecide:
    def test_accept_on_null_like_data(self):
        rep = _report(10, 3, [0.2, 0.1, -0.1])
        for name in TEST_NAMES:
            d = decide(name, rep, 0.05)
            assert isinstance(d, DecisionReport)
            assert not d.reject
            assert d.p_value > 0.05

    def test_reject_on_strong_correlations(self):
        rep = _report(10, 3, [0.9, 0.8, 0.7])
        for name in TEST_NAMES:
            assert decide(name, rep, 0.05).reject

    def test_raw_statistic_reported(self):
        rep = _report(10, 3, [0.5, 0.3, 0.1])
        assert decide("t_star", rep, 0.05).statistic == rep.t
        assert decide("T_c", rep, 0.05).statistic == rep.T

    def test_tie_rejects(self):
        from corrindep.statistics import StatisticReport
        thr = threshold("t_star", 10, 3, 0.05)
        rep = StatisticReport(n=10, p=3, t=thr, tau_sq=0.053872053872053872,
                              t_star=0.0, t_c=0.0)
        assert decide("t_star", rep, 0.05).reject

    def test_to_dict_keys(self):
        rep = _report(10, 3, [0.5, 0.3, 0.1])
        d = decide("t_c", rep, 0.05).to_dict()
        assert set(d) == {"test", "statistic", "threshold", "alpha",
                          "reject", "p_value"}

    def test_decision_coherent_with_p_value(self):
        # reject exactly when the p-value does not exceed alpha, for both
        # calibrations, across random null draws
        alpha = 0.3
        for seed in range(200):
            rep = statistic_report(sample_null_correlations(12, 4, rng=seed))
            for name in TEST_NAMES:
                d = decide(name, rep, alpha)
                assert d.reject == (d.p_value <= alpha)


class TestDecideAll:
    def test_full_set(self):
        rep = _report(10, 3, [0.5, 0.3, 0.1])
        decisions, errors = decide_all(rep, 0.05)
        assert set(decisions) == set(TEST_NAMES)
        assert errors == {}

    def test_subset(self):
        rep = _report(10, 3, [0.5, 0.3, 0.1])
        decisions, errors = decide_all(rep, 0.05, tests=("t_star", "T_c"))
        assert set(decisions) == {"t_star", "T_c"}

    def test_degenerate_splits_by_test(self):
        rep = _report(20, 3, [1.0, 0.0, 0.0])
        decisions, errors = decide_all(rep, 0.05)
        assert set(decisions) == {"t_star", "t_c"}
        assert set(errors) == {"T_star", "T_c"}
        assert decisions["t_star"].reject  # t includes the 1.0 pair

    def test_small_n_splits_by_test(self):
        rep = _report(6, 3, [0.2, 0.1, 0.0])
        decisions, errors = decide_all(rep, 0.05)
        assert set(decisions) == {"t_star", "t_c"}
        assert set(errors) == {"T_star", "T_c"}


class TestRegionCalibrationEquivalence:
    """Thresholding the raw statistic at the region bound is the same
    decision as thresholding the calibrated statistic at the chi-square
    quantile, for every random (statistic, n, p, alpha) tuple."""

    def test_bulk_equivalence(self):
        rng = np.random.default_rng(47)
        for _ in range(EQUIV_TUPLES):
            n = int(rng.integers(7, 400))
            p = int(rng.integers(2, 200))
            alpha = float(rng.uniform(0.005, 0.3))
            m = p * (p - 1) / 2.0
            q = chisq_quantile(alpha, m)

            value = float(rng.uniform(0.5, 2.0) * m / (n - 1.0))
            assert ((value >= region_t_c(n, p, alpha))
                    == (chisq_calibrated_schott(value, n, p) >= q))

            value = float(rng.uniform(0.5, 2.0) * m / (n - 4.0))
            assert ((value >= region_T_c(n, p, alpha))
                    == (chisq_calibrated_mao(value, n, p) >= q))
