"""Level-alpha decision rules and p-values for the four calibrated tests.

Wire names for the tests (used by the CLI, the CSV schema and the simulation
harness):

    t_star  plain statistic, normal critical value
    T_star  ratio statistic, normal critical value
    t_c     plain statistic, chi-square critical value
    T_c     ratio statistic, chi-square critical value

Each region_* function returns the rejection threshold expressed on the RAW
statistic (t or T) so that "statistic >= threshold" is the rejection event.
The regions are closed: equality rejects.  The chi-square thresholds are the
exact rearrangements of "calibrated statistic >= chisq_quantile(alpha, df)";
note the sign structure, which the test suite pins down: the constant term is
negative for T_c (since (n-3)/(n-6) > 1) and positive for t_c (since
(n-2)/(n+1) < 1).

p-values are the matching one-sided upper tails, so p_value <= alpha if and
only if the corresponding region rejects (up to ties at equality, which
reject).
"""

import math
from dataclasses import dataclass

from .distributions import chisq_cdf, chisq_quantile, std_normal_cdf, std_normal_quantile
from .errors import DomainError, SampleSizeError
from .statistics import StatisticReport, sigma_sq, tau_sq

TEST_NAMES = ("t_star", "T_star", "t_c", "T_c")


def _validate(n, p, alpha, min_n, what):
    if p < 2:
        raise DomainError("need p >= 2, got %d" % p)
    if n < min_n:
        raise SampleSizeError("%s needs n >= %d, got n = %d" % (what, min_n, n))
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie strictly between 0 and 1")


def region_t_star(n, p, alpha):
    """Threshold on t for the normal-calibrated plain test."""
    _validate(n, p, alpha, 3, "region_t_star")
    m = float(p * (p - 1))
    return m / (2.0 * (n - 1)) + std_normal_quantile(alpha) * math.sqrt(tau_sq(n, p))


def region_T_star(n, p, alpha):
    """Threshold on T for the normal-calibrated ratio test."""
    _validate(n, p, alpha, 7, "region_T_star")
    m = float(p * (p - 1))
    return m / (2.0 * (n - 4)) + std_normal_quantile(alpha) * math.sqrt(sigma_sq(n, p))


def region_t_c(n, p, alpha):
    """Threshold on t for the chi-square-calibrated plain test.

    Rearrangement of t_c >= chisq_quantile(alpha, p(p-1)/2); the constant
    term p(p-1)/(2(n-1)) (1 - sqrt((n-2)/(n+1))) is positive.
    """
    _validate(n, p, alpha, 3, "region_t_c")
    m = float(p * (p - 1))
    q = chisq_quantile(alpha, 0.5 * m)
    ratio = (n - 2.0) / (n + 1.0)
    return (m / (2.0 * (n - 1)) * (1.0 - math.sqrt(ratio))
            + q * math.sqrt(ratio) / (n - 1))


def region_T_c(n, p, alpha):
    """Threshold on T for the chi-square-calibrated ratio test.

    Rearrangement of T_c >= chisq_quantile(alpha, p(p-1)/2); the constant
    term p(p-1)/(2(n-4)) (1 - sqrt((n-3)/(n-6))) is negative.
    """
    _validate(n, p, alpha, 7, "region_T_c")
    m = float(p * (p - 1))
    q = chisq_quantile(alpha, 0.5 * m)
    ratio = (n - 3.0) / (n - 6.0)
    return (m / (2.0 * (n - 4)) * (1.0 - math.sqrt(ratio))
            + q * math.sqrt(ratio) / (n - 4))


_REGIONS = {
    "t_star": region_t_star,
    "T_star": region_T_star,
    "t_c": region_t_c,
    "T_c": region_T_c,
}


def threshold(test_name, n, p, alpha):
    """Rejection threshold on the raw statistic for any of the four tests."""
    try:
        fn = _REGIONS[test_name]
    except KeyError:
        raise DomainError(
            "unknown test %r (choose from %s)" % (test_name, ", ".join(TEST_NAMES)))
    return fn(n, p, alpha)


def _calibrated_value(test_name, report):
    value = getattr(report, test_name, None)
    if test_name not in TEST_NAMES:
        raise DomainError(
            "unknown test %r (choose from %s)" % (test_name, ", ".join(TEST_NAMES)))
    if value is None:
        reason = report.errors.get(test_name, "statistic unavailable")
        raise DomainError("%s: %s" % (test_name, reason))
    return value


def p_value(test_name, report: StatisticReport):
    """One-sided upper-tail p-value coherent with the rejection regions."""
    value = _calibrated_value(test_name, report)
    if test_name.endswith("_star"):
        return 1.0 - std_normal_cdf(value)
    df = 0.5 * float(report.p * (report.p - 1))
    return 1.0 - chisq_cdf(value, df)


@dataclass
class DecisionReport:
    """Outcome of one test at level alpha; statistic is the raw t or T."""

    test_name: str
    statistic: float
    threshold: float
    alpha: float
    reject: bool
    p_value: float

    def to_dict(self):
        return {
            "test": self.test_name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "alpha": self.alpha,
            "reject": self.reject,
            "p_value": self.p_value,
        }


def decide(test_name, report: StatisticReport, alpha):
    """Threshold the raw statistic for one test; ties reject."""
    _calibrated_value(test_name, report)  # surfaces per-test unavailability
    raw = report.t if test_name in ("t_star", "t_c") else report.T
    thr = threshold(test_name, report.n, report.p, alpha)
    return DecisionReport(
        test_name=test_name,
        statistic=raw,
        threshold=thr,
        alpha=alpha,
        reject=bool(raw >= thr),
        p_value=p_value(test_name, report),
    )


def decide_all(report: StatisticReport, alpha, tests=TEST_NAMES):
    """Decisions for several tests; unavailable ones land in the errors dict.

    Returns (decisions, errors): a dict of DecisionReport keyed by test name
    and a dict of failure reasons for the tests that could not run.
    """
    decisions = {}
    errors = {}
    for name in tests:
        try:
            decisions[name] = decide(name, report, alpha)
        except (DomainError, SampleSizeError) as exc:
            errors[name] = str(exc)
    return decisions, errors
