from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import NDArray

from src.utils.errors import PreconditionError

"""
Pareto (type I) distribution
Survival function P(X > x) = (x_m / x)^alpha for x >= x_m; node degrees of
interaction graphs are modelled with it
"""


"""
Parameters of a Pareto distribution
Attributes:
    alpha: Tail index; mean needs alpha > 1, variance needs alpha > 2
    x_m: Scale (minimum value), fixed to 1 for degree models
"""
@dataclass(frozen=True)
class ParetoParams:

    alpha: float
    x_m: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise PreconditionError(f"alpha must be positive, got {self.alpha}")
        if self.x_m <= 0:
            raise PreconditionError(f"x_m must be positive, got {self.x_m}")

    @property
    def mean(self) -> float:
        if self.alpha <= 1:
            return float("inf")
        return self.alpha * self.x_m / (self.alpha - 1)

    @property
    def variance(self) -> float:
        if self.alpha <= 2:
            return float("inf")
        return self.x_m ** 2 * self.alpha / ((self.alpha - 1) ** 2 * (self.alpha - 2))

    """
    E[X^-s] = alpha / (alpha + s) for x_m = 1, s > -alpha
    """
    def negative_moment(self, s: float) -> float:
        return self.alpha / (self.alpha + s) * self.x_m ** (-s)


"""
Draw from a Pareto distribution by inverse-CDF sampling, x = x_m * U^(-1/alpha)
with U uniform on (0, 1]
Args:
    params: Distribution parameters
    rng: Random generator
    size: Number of draws (None for a single float)
Returns:
    One draw or an array of draws
"""
def pareto_sample(
    params: ParetoParams,
    rng: np.random.Generator,
    size: Optional[int] = None
) -> Union[float, NDArray[np.float64]]:
    """
    Generator.random() is on [0, 1); 1 - U maps it onto (0, 1]
    """
    u = 1.0 - rng.random(size)
    return pareto_quantile(params, u)


"""
Inverse survival map U -> x_m * U^(-1/alpha), exposed for boundary checks
"""
def pareto_quantile(params: ParetoParams, u) -> Union[float, NDArray[np.float64]]:
    x = params.x_m * np.power(u, -1.0 / params.alpha)
    return float(x) if np.ndim(x) == 0 else x


"""
Integer node degrees: Pareto draws rounded up, at least 1
"""
def pareto_degrees(
    params: ParetoParams,
    rng: np.random.Generator,
    size: int,
    cap: Optional[int] = None
) -> NDArray[np.int64]:
    degrees = np.maximum(np.ceil(pareto_sample(params, rng, size)), 1).astype(np.int64)
    if cap is not None:
        degrees = np.minimum(degrees, cap)
    return degrees
