"""Tests of complete independence for high-dimensional normal data.

Given an n x p data matrix of a p-variate normal vector, this package tests
the hypothesis that all p components are mutually independent, using two
statistics built from the off-diagonal sample correlations r_ij: the plain
sum of squares t = sum r_ij^2 and the ratio sum T = sum r_ij^2/(1 - r_ij^2).
Each comes with a normal calibration (t_star, T_star) and a chi-square
calibration (t_c, T_c, both referred to chi-square with p(p-1)/2 degrees of
freedom), all valid with p growing, including p >> n.

Layers:

  correlation   sample correlations and exact null samplers
  statistics    t, T, Q and their calibrated forms (StatisticReport)
  decision      thresholds, p-values, level-alpha decisions
  simulation    Monte Carlo size/power harness with reproducible substreams
  oracle        exact moment identities and their MC verification
  distributions self-contained normal and chi-square CDFs/quantiles
  backend       numba kernels with a pure-numpy fallback (CORRINDEP_BACKEND)
  cli           `corrindep test|simulate|validate`
"""

from .backend import active_backend, available_backends, set_backend
from .correlation import (CorrelationSummary, correlation_summary,
                          pair_indices, sample_null_correlations,
                          sample_null_correlations_batch)
from .decision import (TEST_NAMES, DecisionReport, decide, decide_all,
                       p_value, region_T_c, region_T_star, region_t_c,
                       region_t_star, threshold)
from .distributions import (chisq_cdf, chisq_quantile, std_normal_cdf,
                            std_normal_quantile)
from .errors import (CorrIndepError, DataFormatError, DegenerateColumnError,
                     DegenerateCorrelationError, DomainError, SampleSizeError)
from .oracle import (IDENTITIES, MomentCase, MomentCheck, mao_centered_moment,
                     mao_second_moment_correction, mao_term_variance,
                     run_identity_suite, schott_centered_moments,
                     sphere_r2_moments, verify_moment_by_simulation)
from .simulation import (CSV_HEADER, RejectionOutcome, SimulationResult,
                         SimulationSpec, estimate_rejection_rate,
                         parse_rows_csv, rows_to_csv, rows_to_json, run_table,
                         sample_equicorrelated_normal, simulate_statistics,
                         table1_grid, table2_grid)
from .statistics import (StatisticReport, chisq_calibrated_mao,
                         chisq_calibrated_schott, fisher_Q, mao_T,
                         normalize_mao, normalize_schott, pair_count,
                         schott_t, sigma_sq, statistic_report, tau_sq)

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER", "CorrIndepError", "CorrelationSummary", "DataFormatError",
    "DecisionReport", "DegenerateColumnError", "DegenerateCorrelationError",
    "DomainError", "IDENTITIES", "MomentCase", "MomentCheck",
    "RejectionOutcome", "SampleSizeError", "SimulationResult",
    "SimulationSpec", "StatisticReport", "TEST_NAMES", "active_backend",
    "available_backends", "chisq_calibrated_mao", "chisq_calibrated_schott",
    "chisq_cdf", "chisq_quantile", "correlation_summary", "decide",
    "decide_all", "estimate_rejection_rate", "fisher_Q",
    "mao_T", "mao_centered_moment", "mao_second_moment_correction",
    "mao_term_variance", "normalize_mao", "normalize_schott", "p_value",
    "pair_count", "pair_indices", "parse_rows_csv", "region_T_c",
    "region_T_star", "region_t_c", "region_t_star", "rows_to_csv",
    "rows_to_json", "run_identity_suite", "run_table",
    "sample_equicorrelated_normal", "sample_null_correlations",
    "sample_null_correlations_batch", "schott_centered_moments", "schott_t",
    "set_backend", "sigma_sq", "simulate_statistics", "sphere_r2_moments",
    "statistic_report", "table1_grid", "table2_grid", "tau_sq", "threshold",
    "verify_moment_by_simulation", "__version__",
]
