import logging
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.stats import linregress

from src.losses.batch import Batch, BatchScores
from src.losses.config import LossConfig
from src.losses.functions import bpr_loss, sm_loss, ssm_loss
from src.losses.objective import cosine_softmax_components, grad_wrt_representations
from src.models.embedding_table import Representations
from src.theory import gradcheck
from src.theory.dcg_bound import random_dcg_trials
from src.theory.hard_negatives import magnitude_law
from src.theory.magnitude import MagnitudeModel, expected_sq_magnitude, neighbor_covariance, simulate_sq_magnitude
from src.theory.pareto import ParetoParams, pareto_sample
from src.theory.popularity import closed_form_score, fit_free_score_table
from src.utils.errors import ConfigError
from src.utils.rng import make_rng, spawn_rngs

logger = logging.getLogger(__name__)

"""
Verification suite - Executable checks of the analytical properties of the toolkit
Each check returns a CheckResult; failing checks are reported, not raised
"""

GRADIENT_TOLERANCE = 1e-5
IDENTITY_TOLERANCE = 1e-12
LAW_TOLERANCE = 1e-10
FIXED_POINT_TOLERANCE = 0.02
SAMPLED_NEGATIVES = (400, 800)
SAMPLED_FIT_STEPS = 20_000
MAGNITUDE_RELATIVE_TOLERANCE = 0.02
MAGNITUDE_DEGREES = (1, 2, 4, 8, 16, 32, 64)
MAGNITUDE_TRIALS = 100_000
PARETO_DRAWS = 1_000_000

"""
Pareto(3) has no fourth moment: squared deviations have tail y^(-3/2), so the
relative error of a 10^6-draw sample variance is 0.025 S with S a totally
right-skewed 3/2-stable variable. Its left tail decays like exp(-s^3) and its
right tail like 0.2 s^(-3/2); the band below is 4 scale units down and 20 up,
which one stream leaves with probability about 0.002
"""
PARETO_VARIANCE_BELOW = 0.10
PARETO_VARIANCE_ABOVE = 0.50
TAUS = (0.1, 0.2, 0.5, 1.0)


"""
Outcome of one check
Attributes:
    name: Check identifier
    paper_ref: The analytical property the check exercises
    status: "pass" or "fail"
    max_error: Largest deviation observed (in the check's own unit)
    trials: Number of randomized instances
"""
@dataclass
class CheckResult:

    name: str
    paper_ref: str
    status: str
    max_error: float
    trials: int

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name: str, paper_ref: str, ok: bool, max_error: float, trials: int) -> CheckResult:
    result = CheckResult(name, paper_ref, "pass" if ok else "fail", float(max_error), int(trials))
    log = logger.info if ok else logger.warning
    log("%s: %s (max_error=%.3e, trials=%d)", name, result.status, result.max_error, trials)
    return result


def check_gradient_oracle(trials: int, seed: int) -> CheckResult:
    errors = gradcheck.gradient_matrix(seed=seed)
    worst = max(errors.values())
    return _result(
        "gradient_oracle",
        "analytic gradients of every loss, model and similarity match central differences",
        worst < GRADIENT_TOLERANCE,
        worst,
        len(errors),
    )


def check_ssm_bpr_identity(trials: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    count = min(trials, 1000)
    pos = rng.normal(0.0, 3.0, size=count)
    neg = rng.normal(0.0, 3.0, size=(count, 1))
    worst = 0.0
    for row in range(count):
        batch = Batch(users=[0], pos_items=[0], neg_items=[[1]])
        scores = BatchScores(pos=pos[row:row + 1], neg=neg[row:row + 1])
        ssm_value, ssm_grad = ssm_loss(batch, scores)
        bpr_value, bpr_grad = bpr_loss(batch, scores)
        worst = max(
            worst,
            abs(ssm_value - bpr_value),
            float(np.abs(ssm_grad.pos - bpr_grad.pos).max()),
            float(np.abs(ssm_grad.neg - bpr_grad.neg).max()),
        )
    return _result(
        "ssm_bpr_identity",
        "sampled softmax with one negative equals BPR",
        worst < IDENTITY_TOLERANCE,
        worst,
        count,
    )


def check_ssm_sm_identity(trials: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    count = min(trials, 1000)
    worst = 0.0
    for _ in range(count):
        num_items = int(rng.integers(2, 51))
        catalog = rng.normal(0.0, 2.0, size=num_items)
        positive = int(rng.integers(0, num_items))
        others = np.delete(np.arange(num_items), positive)
        batch = Batch(users=[0], pos_items=[positive], neg_items=others[None, :])
        scores = BatchScores(pos=catalog[[positive]], neg=catalog[others][None, :])
        ssm_value, _ = ssm_loss(batch, scores)
        sm_value, _ = sm_loss(batch, catalog[None, :])
        worst = max(worst, abs(ssm_value - sm_value))
    return _result(
        "ssm_sm_identity",
        "sampled softmax over the whole catalog equals the full softmax",
        worst < IDENTITY_TOLERANCE,
        worst,
        count,
    )


def check_hard_negative_law(trials: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    negatives = 4
    anchors = max(trials // negatives, 1)
    worst = 0.0
    for index in range(anchors):
        tau = TAUS[index % len(TAUS)]
        z_u, z_i = rng.normal(size=(2, 8))
        z_j = rng.normal(size=(negatives, 8))
        parts = cosine_softmax_components(z_u, z_i, z_j, tau)
        measured = np.linalg.norm(parts.c_neg, axis=1) * parts.partition
        expected = magnitude_law(parts.neg_similarity, tau)
        scale = np.maximum(expected, 1e-12 * np.exp(parts.neg_similarity / tau))
        worst = max(worst, float((np.abs(measured - expected) / scale).max()))
    return _result(
        "hard_negative_law",
        "a negative's gradient norm times the partition equals sqrt(1 - x^2) e^(x/tau)",
        worst < LAW_TOLERANCE,
        worst,
        anchors * negatives,
    )


def check_cosine_orthogonality(trials: int, seed: int) -> CheckResult:
    rng = make_rng(seed)
    count = max(min(trials, 200), 1)
    worst = 0.0
    for index in range(count):
        kind = "SSM" if index % 2 == 0 else "SM"
        reps = Representations(z_user=rng.normal(size=(5, 8)), z_item=rng.normal(size=(7, 8)))
        users = rng.integers(0, 5, size=6)
        batch = Batch(users=users, pos_items=rng.integers(0, 7, size=6), neg_items=rng.integers(0, 7, size=(6, 3)))
        cfg = LossConfig(kind=kind, similarity="cosine", temperature=TAUS[index % len(TAUS)])
        _, grads, _ = grad_wrt_representations(cfg, batch, reps)
        for grad, vectors in ((grads.z_user, reps.z_user), (grads.z_item, reps.z_item)):
            inner = np.abs(np.einsum("nd,nd->n", grad, vectors))
            scale = np.linalg.norm(grad, axis=1) * np.linalg.norm(vectors, axis=1)
            ratio = np.where(scale > 0, inner / np.maximum(scale, 1e-300), 0.0)
            worst = max(worst, float(ratio.max()))
    return _result(
        "cosine_orthogonality",
        "cosine softmax gradients are orthogonal to the representations",
        worst < 1e-8,
        worst,
        count,
    )


def check_popularity_fixed_point(trials: int, seed: int) -> CheckResult:
    p_n = (0.75, 0.25)
    errors = []
    converged = True
    runs = [("expected", n, 5000) for n in (100, 200)]
    runs += [("sampled", n, SAMPLED_FIT_STEPS) for n in SAMPLED_NEGATIVES]
    for mode, negatives, steps in runs:
        fit = fit_free_score_table(p_n, negatives, [[0, 1]], steps=steps, negatives=mode, seed=seed)
        converged = converged and fit.converged
        expected = closed_form_score(0.75, negatives, 2) - closed_form_score(0.25, negatives, 2)
        observed = float(fit.differences(reference=1)[0, 0])
        errors.append(abs(observed - expected))
        logger.debug("%s fit with N=%d: gap %.4f vs %.4f", mode, negatives, observed, expected)
    worst = max(errors)
    return _result(
        "popularity_fixed_point",
        "the fitted score gap between a popular and an unpopular item matches the closed form",
        converged and worst <= FIXED_POINT_TOLERANCE,
        worst,
        len(runs),
    )


def check_popularity_monotonicity(trials: int, seed: int) -> CheckResult:
    p_n = np.array([0.1, 0.15, 0.2, 0.25, 0.3])
    interactions = [list(range(len(p_n)))]
    runs = [("expected", 100, 5000), ("sampled", SAMPLED_NEGATIVES[0], SAMPLED_FIT_STEPS)]
    monotone = True
    gap = 0.0
    for mode, negatives, steps in runs:
        fit = fit_free_score_table(p_n, negatives, interactions, steps=steps, negatives=mode, seed=seed)
        fitted = fit.scores[0]
        closed = np.array([closed_form_score(p, negatives, len(p_n)) for p in p_n])
        monotone = monotone and bool((np.diff(fitted) < 0).all() and (np.diff(closed) < 0).all())
        gap = max(gap, float(np.abs((fitted - fitted[0]) - (closed - closed[0])).max()))
    return _result(
        "popularity_monotonicity",
        "optimal scores strictly decrease as the sampling probability grows",
        monotone and gap <= FIXED_POINT_TOLERANCE,
        gap,
        len(runs) * len(p_n),
    )


def check_dcg_bound(trials: int, seed: int) -> CheckResult:
    violations, worst = random_dcg_trials(trials, make_rng(seed))
    return _result(
        "dcg_bound",
        "-log DCG <= log rank <= sampled softmax loss for a single positive",
        violations == 0,
        worst,
        trials,
    )


def check_pareto_moments(trials: int, seed: int) -> CheckResult:
    params = ParetoParams(alpha=3.0)
    draws = pareto_sample(params, make_rng(seed), PARETO_DRAWS)

    standard_error = np.sqrt(params.variance / PARETO_DRAWS)
    mean_error = abs(draws.mean() - params.mean) / standard_error
    variance_error = (draws.var(ddof=1) - params.variance) / params.variance
    ok = mean_error <= 3.0 and -PARETO_VARIANCE_BELOW <= variance_error <= PARETO_VARIANCE_ABOVE
    return _result(
        "pareto_moments",
        "Pareto(3) draws have mean 1.5 and variance 0.75",
        ok,
        abs(variance_error),
        PARETO_DRAWS,
    )


def check_magnitude_formula(trials: int, seed: int) -> CheckResult:
    models = [
        MagnitudeModel(alpha0=alpha0, alpha1=alpha1, mu0=mu0, sigma0=0.1)
        for alpha0 in (0.0, 0.5, 1.0)
        for alpha1 in (0.0, 0.5)
        for mu0 in (0.0, 0.1)
    ]
    streams = spawn_rngs(seed, len(models))
    worst = 0.0
    ok = True
    for model, rng in zip(models, streams):
        for degree in MAGNITUDE_DEGREES:
            mean, error = simulate_sq_magnitude(model, 3.0, degree, MAGNITUDE_TRIALS, rng)
            expected = expected_sq_magnitude(model, 3.0, degree)
            deviation = abs(mean - expected)
            worst = max(worst, deviation / expected)
            if deviation > max(MAGNITUDE_RELATIVE_TOLERANCE * expected, 3.0 * error):
                ok = False
    return _result(
        "magnitude_formula",
        "the propagated second moment equals a D^(1-2a0) + b D^(2-2a0)",
        ok,
        worst,
        len(models) * len(MAGNITUDE_DEGREES) * MAGNITUDE_TRIALS,
    )


def check_lightgcn_linearity(trials: int, seed: int) -> CheckResult:
    model = MagnitudeModel(alpha0=0.5, alpha1=0.5, mu0=0.1, sigma0=0.1)
    rng = make_rng(seed)
    moments = [
        simulate_sq_magnitude(model, 3.0, degree, MAGNITUDE_TRIALS, rng)[0]
        for degree in MAGNITUDE_DEGREES
    ]
    fit = linregress(np.array(MAGNITUDE_DEGREES, dtype=np.float64), np.array(moments))
    r_squared = float(fit.rvalue ** 2)
    return _result(
        "lightgcn_magnitude_linearity",
        "with symmetric normalization and non-zero mean the second moment grows linearly in degree",
        r_squared > 0.99,
        1.0 - r_squared,
        len(MAGNITUDE_DEGREES) * MAGNITUDE_TRIALS,
    )


def check_neighbor_covariance(trials: int, seed: int) -> CheckResult:
    model = MagnitudeModel(alpha0=0.5, alpha1=0.5, mu0=0.1, sigma0=0.1)
    covariance, error = neighbor_covariance(model, 3.0, MAGNITUDE_TRIALS, make_rng(seed))
    return _result(
        "neighbor_covariance",
        "contributions of distinct neighbors are uncorrelated",
        abs(covariance) <= 4.0 * error,
        abs(covariance),
        MAGNITUDE_TRIALS,
    )


Check = Callable[[int, int], CheckResult]

SUITES: dict[str, list[Check]] = {
    "gradients": [
        check_gradient_oracle,
        check_ssm_bpr_identity,
        check_ssm_sm_identity,
        check_hard_negative_law,
        check_cosine_orthogonality,
    ],
    "fixed_point": [check_popularity_fixed_point, check_popularity_monotonicity],
    "dcg": [check_dcg_bound],
    "magnitude": [
        check_pareto_moments,
        check_magnitude_formula,
        check_lightgcn_linearity,
        check_neighbor_covariance,
    ],
}
SUITE_NAMES = ("all", *SUITES)
ALL_CHECKS: list[Check] = [check for suite in SUITES.values() for check in suite]


"""
Run a verification suite
Args:
    name: all, gradients, fixed_point, dcg or magnitude
    trials: Randomized instances for the trial-based checks
    seed: Root seed; each check derives its own seed, identical across suites
Returns:
    One CheckResult per check
Raises:
    ConfigError: Unknown suite
Example:
    >>> results = run_suite("dcg", trials=10_000)
    >>> all(r.passed for r in results)
    True
"""
def run_suite(name: str = "all", trials: int = 10_000, seed: int = 0) -> list[CheckResult]:
    if name not in SUITE_NAMES:
        raise ConfigError(f"unknown suite {name!r}, expected one of {SUITE_NAMES}")
    checks = ALL_CHECKS if name == "all" else SUITES[name]
    return [check(trials, seed + ALL_CHECKS.index(check)) for check in checks]
