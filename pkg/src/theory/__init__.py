"""
Theory module - Executable checks of the analytical properties behind the losses and models.
"""

from src.theory.pareto import ParetoParams, pareto_sample, pareto_quantile, pareto_degrees
from src.theory.gradcheck import finite_diff_grad, relative_error, check_gradient, gradient_matrix
from src.theory.popularity import closed_form_score, fit_free_score_table, FreeScoreFit
from src.theory.hard_negatives import magnitude_law, negative_grad_magnitude, hardest_negative_similarity
from src.theory.dcg_bound import DcgBoundResult, dcg_bound_check, random_dcg_trials
from src.theory.magnitude import (
    MagnitudeModel,
    expected_sq_magnitude,
    simulate_sq_magnitude,
    neighbor_covariance,
)
from src.theory.suite import CheckResult, SUITES, SUITE_NAMES, run_suite

__all__ = [
    "ParetoParams",
    "pareto_sample",
    "pareto_quantile",
    "pareto_degrees",
    "finite_diff_grad",
    "relative_error",
    "check_gradient",
    "gradient_matrix",
    "closed_form_score",
    "fit_free_score_table",
    "FreeScoreFit",
    "magnitude_law",
    "negative_grad_magnitude",
    "hardest_negative_similarity",
    "DcgBoundResult",
    "dcg_bound_check",
    "random_dcg_trials",
    "MagnitudeModel",
    "expected_sq_magnitude",
    "simulate_sq_magnitude",
    "neighbor_covariance",
    "CheckResult",
    "SUITES",
    "SUITE_NAMES",
    "run_suite",
]
