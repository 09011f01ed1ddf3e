import numpy as np
from numpy.typing import NDArray

from src.utils.errors import PreconditionError, VerificationError

"""
Gradient share of hard negatives under cosine sampled softmax
A negative with cosine x to the anchor contributes a gradient term of norm
sqrt(1 - x^2) e^{x/tau} / Z_u, which peaks at a large positive x when tau is small
"""

UNIT_TOLERANCE = 1e-10
LAW_TOLERANCE = 1e-10
"""
sqrt(1 - x^2) from a rounded cosine is only accurate to about sqrt(eps) near x = +-1
"""
COLLINEAR_SLACK = 4.0 * float(np.sqrt(np.finfo(np.float64).eps))


"""
Law value sqrt(1 - x^2) e^{x/tau}, before division by the partition
"""
def magnitude_law(x: NDArray[np.float64], tau: float) -> NDArray[np.float64]:
    x = np.clip(x, -1.0, 1.0)
    return np.sqrt(1.0 - x * x) * np.exp(x / tau)


"""
Norm of the negative's gradient term c(j) = P_j (s_j - (s_u . s_j) s_u)
The result is checked against the closed-form law
Args:
    s_u: Unit anchor vector
    s_j: Unit negative vector
    tau: Temperature
    partition: Z_u of the anchor
Returns:
    ||c(j)||
Raises:
    PreconditionError: Inputs not unit-norm, tau <= 0 or partition <= 0
    VerificationError: The computed norm disagrees with the law
Example:
    >>> negative_grad_magnitude(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.2, 1.0)
    1.0
"""
def negative_grad_magnitude(
    s_u: NDArray[np.float64],
    s_j: NDArray[np.float64],
    tau: float,
    partition: float
) -> float:
    s_u = np.asarray(s_u, dtype=np.float64)
    s_j = np.asarray(s_j, dtype=np.float64)
    for name, vector in (("s_u", s_u), ("s_j", s_j)):
        if abs(np.linalg.norm(vector) - 1.0) > UNIT_TOLERANCE:
            raise PreconditionError(f"{name} must be unit-norm")
    if tau <= 0 or partition <= 0:
        raise PreconditionError("tau and partition must be positive")

    x = float(s_u @ s_j)
    probability = np.exp(x / tau) / partition
    magnitude = float(probability * np.linalg.norm(s_j - x * s_u))

    expected = float(magnitude_law(np.array(x), tau)) / partition
    if abs(magnitude - expected) > LAW_TOLERANCE * expected + COLLINEAR_SLACK * probability:
        raise VerificationError(f"gradient norm {magnitude} disagrees with law value {expected}")
    return magnitude


"""
Cosine that maximizes the law, by grid search and in closed form
Setting the log-derivative to zero gives x^2 + tau x - 1 = 0
Args:
    tau: Temperature
    grid: Number of grid points on [-1, 1]
Returns:
    (grid maximizer, closed-form maximizer)
"""
def hardest_negative_similarity(tau: float, grid: int = 20001) -> tuple[float, float]:
    if tau <= 0:
        raise PreconditionError(f"tau must be positive, got {tau}")
    xs = np.linspace(-1.0, 1.0, grid)
    best = float(xs[np.argmax(magnitude_law(xs, tau))])
    closed = float((np.sqrt(tau * tau + 4.0) - tau) / 2.0)
    return best, closed
