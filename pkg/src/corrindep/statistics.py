"""Test statistics for complete independence and their calibrated forms.

Three raw statistics are computed from the off-diagonal correlations:

    schott_t:  sum of r^2                  (plain sum of squares)
    mao_T:     sum of r^2 / (1 - r^2)      (ratio form; finite only if |r| < 1)
    fisher_Q:  normalized sum of atanh(r)^2 (Fisher z-transformation)

Under the null, t and T have exact means p(p-1)/(2(n-1)) and p(p-1)/(2(n-4))
and exact variances tau_sq and sigma_sq below.  Subtracting the mean and
dividing by the standard deviation gives the normal-calibrated statistics
(normalize_schott / normalize_mao); the chi-square calibrated forms rescale
those onto a chi-square scale with p(p-1)/2 degrees of freedom:

    calibrated = sqrt(p(p-1)) * normalized + p(p-1)/2

which is evaluated here in the algebraically equivalent direct form (an
affine map of the raw statistic) to avoid subtracting two large centering
terms at big p.  Both forms are computed and cross-checked to 1e-9 relative
on every call.

Minimum sample sizes are enforced per statistic: the plain path needs n >= 3,
the ratio path needs n >= 7 (its null variance has an n - 6 factor), and the
Fisher path needs n >= 4.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .correlation import CorrelationSummary
from .errors import DegenerateCorrelationError, DomainError, SampleSizeError

# calibrated forms must agree with their definitional rescaling to this
_CROSS_FORM_RTOL = 1e-9


def _validate_np(n, p, min_n, what):
    if p < 2:
        raise DomainError("need p >= 2, got %d" % p)
    if n < min_n:
        raise SampleSizeError("%s needs n >= %d, got n = %d" % (what, min_n, n))


def pair_count(p):
    """Number of off-diagonal pairs, p(p-1)/2."""
    if p < 2:
        raise DomainError("need p >= 2, got %d" % p)
    return p * (p - 1) // 2


def tau_sq(n, p):
    """Exact null variance of schott_t: p(p-1)(n-2) / ((n-1)^2 (n+1))."""
    _validate_np(n, p, 3, "tau_sq")
    return float(p * (p - 1)) * (n - 2) / ((n - 1) ** 2 * (n + 1))


def sigma_sq(n, p):
    """Exact null variance of mao_T: p(p-1)(n-3) / ((n-4)^2 (n-6))."""
    _validate_np(n, p, 7, "sigma_sq")
    return float(p * (p - 1)) * (n - 3) / ((n - 4) ** 2 * (n - 6))


def schott_t(corr: CorrelationSummary):
    """Sum of squared off-diagonal correlations."""
    off = corr.offdiag
    return float(off @ off)


def mao_T(corr: CorrelationSummary):
    """Sum of r^2/(1 - r^2); raises DegenerateCorrelationError if some |r| = 1."""
    r2 = corr.offdiag ** 2
    if np.any(r2 >= 1.0):
        raise DegenerateCorrelationError(
            "a sample correlation equals +-1; the ratio statistic is infinite")
    return float(np.sum(r2 / (1.0 - r2)))


def fisher_Q(corr: CorrelationSummary):
    """Fisher z-transformation statistic ((n-3) sum z^2 - m/2-scaled)."""
    if corr.n < 4:
        raise SampleSizeError("fisher_Q needs n >= 4, got n = %d" % corr.n)
    if np.any(np.abs(corr.offdiag) >= 1.0):
        raise DegenerateCorrelationError(
            "a sample correlation equals +-1; atanh(r) is infinite")
    z = np.arctanh(corr.offdiag)
    m = float(corr.p * (corr.p - 1))
    return ((corr.n - 3) * float(z @ z) - 0.5 * m) / math.sqrt(m)


def normalize_schott(t, n, p):
    """Normal-calibrated plain statistic: (t - p(p-1)/(2(n-1))) / tau."""
    _validate_np(n, p, 3, "normalize_schott")
    m = float(p * (p - 1))
    return (t - m / (2.0 * (n - 1))) / math.sqrt(tau_sq(n, p))


def normalize_mao(T, n, p):
    """Normal-calibrated ratio statistic: (T - p(p-1)/(2(n-4))) / sigma."""
    _validate_np(n, p, 7, "normalize_mao")
    m = float(p * (p - 1))
    return (T - m / (2.0 * (n - 4))) / math.sqrt(sigma_sq(n, p))


def _check_cross_form(direct, definitional, what):
    if not math.isclose(direct, definitional, rel_tol=_CROSS_FORM_RTOL, abs_tol=1e-9):
        raise ArithmeticError(
            "%s: calibrated forms disagree (%r vs %r)" % (what, direct, definitional))


def chisq_calibrated_schott(t, n, p):
    """Chi-square-calibrated plain statistic (df = p(p-1)/2 scale).

    Direct form sqrt((n+1)/(n-2)) (n-1) t + p(p-1)/2 (1 - sqrt((n+1)/(n-2))),
    cross-checked against sqrt(p(p-1)) t* + p(p-1)/2.
    """
    _validate_np(n, p, 3, "chisq_calibrated_schott")
    m = float(p * (p - 1))
    c = math.sqrt((n + 1.0) / (n - 2.0))
    direct = c * (n - 1) * t + 0.5 * m * (1.0 - c)
    definitional = math.sqrt(m) * normalize_schott(t, n, p) + 0.5 * m
    _check_cross_form(direct, definitional, "chisq_calibrated_schott")
    return direct


def chisq_calibrated_mao(T, n, p):
    """Chi-square-calibrated ratio statistic (df = p(p-1)/2 scale).

    Direct form sqrt((n-6)/(n-3)) (n-4) T + p(p-1)/2 (1 - sqrt((n-6)/(n-3))),
    cross-checked against sqrt(p(p-1)) T* + p(p-1)/2.
    """
    _validate_np(n, p, 7, "chisq_calibrated_mao")
    m = float(p * (p - 1))
    c = math.sqrt((n - 6.0) / (n - 3.0))
    direct = c * (n - 4) * T + 0.5 * m * (1.0 - c)
    definitional = math.sqrt(m) * normalize_mao(T, n, p) + 0.5 * m
    _check_cross_form(direct, definitional, "chisq_calibrated_mao")
    return direct


@dataclass
class StatisticReport:
    """Every statistic computable for one dataset; None where undefined.

    ``errors`` maps a field name to the reason it is None (degenerate
    correlation, sample size too small, ...).
    """

    n: int
    p: int
    t: float
    tau_sq: float
    t_star: float
    t_c: float
    T: float = None
    Q: float = None
    sigma_sq: float = None
    T_star: float = None
    T_c: float = None
    errors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "n": self.n, "p": self.p,
            "t": self.t, "T": self.T, "Q": self.Q,
            "t_star": self.t_star, "T_star": self.T_star,
            "t_c": self.t_c, "T_c": self.T_c,
            "tau_sq": self.tau_sq, "sigma_sq": self.sigma_sq,
            "errors": dict(self.errors),
        }


def statistic_report(corr: CorrelationSummary):
    """Compute all statistics, recording per-statistic failures instead of
    raising, so small-n or degenerate inputs still yield the usable subset."""
    n, p = corr.n, corr.p
    rep = StatisticReport(
        n=n, p=p,
        t=schott_t(corr),
        tau_sq=tau_sq(n, p),
        t_star=None, t_c=None,
    )
    rep.t_star = normalize_schott(rep.t, n, p)
    rep.t_c = chisq_calibrated_schott(rep.t, n, p)

    try:
        rep.T = mao_T(corr)
    except DegenerateCorrelationError as exc:
        rep.errors["T"] = str(exc)
    try:
        rep.Q = fisher_Q(corr)
    except (DegenerateCorrelationError, SampleSizeError) as exc:
        rep.errors["Q"] = str(exc)

    try:
        rep.sigma_sq = sigma_sq(n, p)
    except SampleSizeError as exc:
        rep.errors["sigma_sq"] = str(exc)

    if rep.T is None:
        reason = rep.errors.get("T", "ratio statistic unavailable")
        rep.errors.setdefault("T_star", reason)
        rep.errors.setdefault("T_c", reason)
        return rep
    if rep.sigma_sq is None:
        rep.errors["T_star"] = rep.errors["sigma_sq"]
        rep.errors["T_c"] = rep.errors["sigma_sq"]
        return rep
    rep.T_star = normalize_mao(rep.T, n, p)
    rep.T_c = chisq_calibrated_mao(rep.T, n, p)
    return rep
