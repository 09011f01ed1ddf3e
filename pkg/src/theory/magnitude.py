from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.theory.pareto import ParetoParams, pareto_sample
from src.utils.errors import PreconditionError

"""
Second moment of a propagated embedding coordinate
An item with D neighbors receives q' = sum_u p_u / (D^alpha0 d_u^alpha1) where
p_u ~ Normal(mu0, sigma0^2) and user degrees d_u ~ Pareto(alpha) are independent.
Then E[q'^2] = a D^(1 - 2 alpha0) + b D^(2 - 2 alpha0) with
    a = alpha/(alpha + 2 alpha1) (sigma0^2 + mu0^2) - (alpha/(alpha + alpha1))^2 mu0^2
    b = alpha^2 mu0^2 / (alpha + alpha1)^2
"""


"""
Propagation exponents and initialization moments of one coordinate
Attributes:
    alpha0: Target-degree exponent
    alpha1: Source-degree exponent
    mu0: Mean of the initialization
    sigma0: Standard deviation of the initialization
"""
@dataclass(frozen=True)
class MagnitudeModel:

    alpha0: float
    alpha1: float
    mu0: float
    sigma0: float

    def __post_init__(self):
        if self.alpha0 < 0 or self.alpha1 < 0:
            raise PreconditionError("propagation exponents must be >= 0")
        if self.sigma0 <= 0:
            raise PreconditionError(f"sigma0 must be positive, got {self.sigma0}")

    """
    (a, b) for a Pareto tail index
    """
    def coefficients(self, alpha: float) -> tuple[float, float]:
        params = ParetoParams(alpha=alpha)
        first = params.negative_moment(self.alpha1)
        second = params.negative_moment(2.0 * self.alpha1)
        a = second * (self.sigma0 ** 2 + self.mu0 ** 2) - first ** 2 * self.mu0 ** 2
        b = first ** 2 * self.mu0 ** 2
        return a, b


def _check_alpha(model: MagnitudeModel, alpha: float):
    if alpha <= max(2.0, 2.0 * model.alpha1):
        raise PreconditionError(
            f"alpha must exceed max(2, 2 * alpha1) = {max(2.0, 2.0 * model.alpha1)}, got {alpha}"
        )


"""
Closed-form E[q'^2] for an item of the given degree
Raises:
    PreconditionError: alpha out of range or degree < 1
Example:
    >>> expected_sq_magnitude(MagnitudeModel(0.5, 0.5, 0.0, 1.0), 3.0, 16)
    0.75
"""
def expected_sq_magnitude(model: MagnitudeModel, alpha: float, degree: float) -> float:
    _check_alpha(model, alpha)
    if degree < 1:
        raise PreconditionError(f"degree must be >= 1, got {degree}")
    a, b = model.coefficients(alpha)
    return float(a * degree ** (1 - 2 * model.alpha0) + b * degree ** (2 - 2 * model.alpha0))


def _neighbor_terms(
    model: MagnitudeModel,
    alpha: float,
    shape: tuple[int, ...],
    rng: np.random.Generator
) -> NDArray[np.float64]:
    degrees = pareto_sample(ParetoParams(alpha=alpha), rng, shape)
    values = rng.normal(model.mu0, model.sigma0, size=shape)
    return values * degrees ** -model.alpha1


"""
Monte Carlo estimate of E[q'^2] with continuous Pareto degrees
Returns:
    (mean, standard error)
"""
def simulate_sq_magnitude(
    model: MagnitudeModel,
    alpha: float,
    degree: int,
    trials: int,
    rng: np.random.Generator
) -> tuple[float, float]:
    _check_alpha(model, alpha)
    propagated = _neighbor_terms(model, alpha, (trials, degree), rng).sum(axis=1) / degree ** model.alpha0
    squares = propagated ** 2
    return float(squares.mean()), float(squares.std(ddof=1) / np.sqrt(trials))


"""
Monte Carlo covariance between the contributions of two distinct neighbors
Independent sampling makes it zero in expectation
Returns:
    (covariance, standard error)
"""
def neighbor_covariance(
    model: MagnitudeModel,
    alpha: float,
    trials: int,
    rng: np.random.Generator
) -> tuple[float, float]:
    _check_alpha(model, alpha)
    terms = _neighbor_terms(model, alpha, (trials, 2), rng)
    centered = terms - terms.mean(axis=0)
    products = centered[:, 0] * centered[:, 1]
    return float(products.mean()), float(products.std(ddof=1) / np.sqrt(trials))
