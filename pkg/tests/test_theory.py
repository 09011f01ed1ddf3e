import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.theory.dcg_bound import dcg_bound_check, random_dcg_trials
from src.theory.gradcheck import finite_diff_grad, relative_error
from src.theory.hard_negatives import hardest_negative_similarity, magnitude_law, negative_grad_magnitude
from src.theory.magnitude import MagnitudeModel, expected_sq_magnitude, simulate_sq_magnitude
from src.theory.pareto import ParetoParams, pareto_degrees, pareto_quantile, pareto_sample
from src.theory.popularity import closed_form_score, fit_free_score_table
from src.theory.suite import PARETO_VARIANCE_ABOVE, SUITE_NAMES, check_pareto_moments, run_suite
from src.utils.errors import ConfigError, PreconditionError
from src.utils.rng import make_rng


class TestFiniteDifferences:

    def test_square(self):
        grad = finite_diff_grad(lambda x: float(x[0] ** 2), np.array([3.0]))
        assert grad[0] == pytest.approx(6.0, abs=1e-6)

    def test_linear_function_is_exact(self):
        grad = finite_diff_grad(lambda x: float(2.0 * x[0] - 3.0 * x[1]), np.array([0.4, -1.0]))
        np.testing.assert_allclose(grad, [2.0, -3.0], atol=1e-8)

    def test_params_are_not_modified(self):
        params = np.array([[1.0, 2.0]])
        finite_diff_grad(lambda x: float((x ** 3).sum()), params)
        assert params.tolist() == [[1.0, 2.0]]

    def test_epsilon_range(self):
        with pytest.raises(PreconditionError):
            finite_diff_grad(lambda x: 0.0, np.zeros(1), epsilon=1e-2)

    def test_relative_error(self):
        assert relative_error(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0
        assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(0.5)


class TestPopularity:

    def test_closed_form_gap(self):
        gap = closed_form_score(0.75, 100, 2) - closed_form_score(0.25, 100, 2)
        assert gap == pytest.approx(math.log(51 / 151))
        assert gap == pytest.approx(-1.0854, abs=1e-3)

    def test_more_negatives_widen_the_gap(self):
        def gap(n):
            return closed_form_score(0.75, n, 2) - closed_form_score(0.25, n, 2)
        assert gap(200) < gap(100) < 0

    def test_invalid_probability(self):
        with pytest.raises(PreconditionError):
            closed_form_score(1.5, 10, 1)

    def test_fit_matches_closed_form(self):
        fit = fit_free_score_table((0.75, 0.25), 100, [[0, 1]])
        assert fit.converged
        expected = closed_form_score(0.75, 100, 2) - closed_form_score(0.25, 100, 2)
        assert fit.differences(reference=1)[0, 0] == pytest.approx(expected, abs=0.02)

    def test_fit_scores_fall_with_sampling_probability(self):
        p_n = [0.1, 0.15, 0.2, 0.25, 0.3]
        fit = fit_free_score_table(p_n, 100, [[0, 1, 2, 3, 4]])
        assert (np.diff(fit.scores[0]) < 0).all()

    @pytest.mark.slow
    def test_sampled_fit_matches_closed_form(self):
        fit = fit_free_score_table((0.75, 0.25), 400, [[0, 1]], steps=20_000, negatives="sampled", seed=1)
        assert fit.converged
        expected = closed_form_score(0.75, 400, 2) - closed_form_score(0.25, 400, 2)
        assert fit.differences(reference=1)[0, 0] == pytest.approx(expected, abs=0.02)

    @pytest.mark.parametrize("mode", ["expected", "sampled"])
    def test_uniform_sampling_of_symmetric_interactions_gives_equal_scores(self, mode):
        fit = fit_free_score_table([0.25] * 4, 200, [[0, 1, 2, 3], [0, 1, 2, 3]], negatives=mode)
        np.testing.assert_allclose(fit.differences(reference=0), 0.0, atol=0.02)

    def test_doubling_negatives_shifts_scores_by_log_two(self):
        p_n = np.array([0.5, 0.3, 0.2])
        shifts, gaps = [], []
        for negatives in (500, 1000):
            fit = fit_free_score_table(p_n, negatives, [[0, 1, 2]])
            closed = np.array([closed_form_score(p, negatives, 3) for p in p_n])
            shifts.append(float(np.mean(fit.scores[0] - closed)))
            gaps.append(fit.differences(reference=2)[0])
        assert shifts[1] - shifts[0] == pytest.approx(math.log(2), abs=0.02)
        np.testing.assert_allclose(gaps[1], gaps[0], atol=0.02)
        assert closed_form_score(0.3, 2000, 3) - closed_form_score(0.3, 1000, 3) == pytest.approx(
            -math.log(2), abs=0.01
        )

    def test_rejects_bad_inputs(self):
        with pytest.raises(PreconditionError):
            fit_free_score_table((0.5, 0.4), 10, [[0]])
        with pytest.raises(PreconditionError):
            fit_free_score_table((0.5, 0.5), 10, [[]])


class TestHardNegatives:

    @pytest.mark.parametrize("tau", [0.1, 0.2, 0.5, 1.0])
    def test_grid_and_closed_form_agree(self, tau):
        best, closed = hardest_negative_similarity(tau)
        assert 0.0 < closed < 1.0
        assert best == pytest.approx(closed, abs=2e-4)

    def test_closed_form_value(self):
        _, closed = hardest_negative_similarity(0.2)
        assert closed == pytest.approx((math.sqrt(4.04) - 0.2) / 2)

    def test_orthogonal_negative(self):
        assert negative_grad_magnitude(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.2, 1.0) == pytest.approx(1.0)

    def test_collinear_negative_has_no_gradient(self):
        s = np.array([0.6, 0.8])
        assert negative_grad_magnitude(s, s, 0.5, 2.0) == pytest.approx(0.0, abs=1e-12)

    def test_requires_unit_vectors(self):
        with pytest.raises(PreconditionError):
            negative_grad_magnitude(np.array([2.0, 0.0]), np.array([0.0, 1.0]), 0.2, 1.0)

    @given(st.floats(0.02, np.pi - 0.02), st.sampled_from([0.1, 0.2, 0.5, 1.0]))
    def test_law_on_the_circle(self, angle, tau):
        s_u = np.array([1.0, 0.0])
        s_j = np.array([np.cos(angle), np.sin(angle)])
        measured = negative_grad_magnitude(s_u, s_j, tau, 3.0)
        assert measured == pytest.approx(float(magnitude_law(np.array(np.cos(angle)), tau)) / 3.0, rel=1e-9, abs=1e-300)


class TestDcgBound:

    def test_top_ranked_positive(self):
        result = dcg_bound_check(np.array([1.0, 0.0]), 0)
        assert result.rank == 1
        assert result.lhs == pytest.approx(0.0)
        assert result.rhs == pytest.approx(0.3133, abs=1e-4)
        assert result.ok

    def test_second_ranked_positive(self):
        result = dcg_bound_check(np.array([1.0, 0.0]), 1)
        assert result.rank == 2
        assert result.lhs == pytest.approx(math.log(math.log2(3)))
        assert result.rank_term == pytest.approx(math.log(2))
        assert result.ok

    def test_ties_do_not_count(self):
        assert dcg_bound_check(np.array([0.5, 0.5, 0.5]), 2).rank == 1

    def test_random_trials(self):
        violations, _ = random_dcg_trials(2000, make_rng(0))
        assert violations == 0

    def test_bad_index(self):
        with pytest.raises(PreconditionError):
            dcg_bound_check(np.array([1.0]), 1)


class TestPareto:

    def test_moments(self):
        params = ParetoParams(alpha=3.0)
        assert params.mean == pytest.approx(1.5)
        assert params.variance == pytest.approx(0.75)
        assert ParetoParams(alpha=2.0).variance == math.inf
        assert params.negative_moment(1.0) == pytest.approx(0.75)

    def test_quantile_boundary(self):
        assert pareto_quantile(ParetoParams(alpha=3.0), 1.0) == 1.0

    def test_draws_are_at_least_scale(self):
        draws = pareto_sample(ParetoParams(alpha=2.5, x_m=2.0), make_rng(0), 1000)
        assert draws.min() >= 2.0

    def test_degrees(self):
        degrees = pareto_degrees(ParetoParams(alpha=1.5), make_rng(1), 500, cap=40)
        assert degrees.min() >= 1 and degrees.max() <= 40

    def test_invalid_alpha(self):
        with pytest.raises(PreconditionError):
            ParetoParams(alpha=0.0)

    def test_single_stream_moment_check(self):
        result = check_pareto_moments(0, 4)
        assert result.passed
        assert result.trials == 1_000_000
        assert result.max_error <= PARETO_VARIANCE_ABOVE


class TestMagnitude:

    def test_closed_form(self):
        model = MagnitudeModel(alpha0=0.5, alpha1=0.5, mu0=0.0, sigma0=1.0)
        assert expected_sq_magnitude(model, 3.0, 16) == pytest.approx(0.75)

    def test_plain_sum_grows_quadratically_with_mean(self):
        model = MagnitudeModel(alpha0=0.0, alpha1=0.0, mu0=1.0, sigma0=1.0)
        assert expected_sq_magnitude(model, 3.0, 4) == pytest.approx(4 + 16)

    def test_alpha_must_exceed_two(self):
        with pytest.raises(PreconditionError):
            expected_sq_magnitude(MagnitudeModel(0.5, 0.5, 0.0, 1.0), 2.0, 4)

    def test_simulation_agrees(self):
        model = MagnitudeModel(alpha0=0.5, alpha1=0.0, mu0=0.1, sigma0=0.1)
        mean, error = simulate_sq_magnitude(model, 3.0, 4, 50_000, make_rng(2))
        expected = expected_sq_magnitude(model, 3.0, 4)
        assert abs(mean - expected) <= 5 * error


class TestSuite:

    def test_names(self):
        assert SUITE_NAMES == ("all", "gradients", "fixed_point", "dcg", "magnitude")

    def test_dcg_suite_passes(self):
        results = run_suite("dcg", trials=2000)
        assert [r.name for r in results] == ["dcg_bound"]
        assert all(r.passed for r in results)

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            run_suite("everything")

    @pytest.mark.slow
    def test_fixed_point_suite_passes(self):
        results = run_suite("fixed_point")
        assert [r.status for r in results] == ["pass", "pass"]

    @pytest.mark.slow
    def test_gradient_suite_passes(self):
        assert all(r.passed for r in run_suite("gradients", trials=400))

    @pytest.mark.slow
    def test_magnitude_suite_passes(self):
        assert all(r.passed for r in run_suite("magnitude"))
