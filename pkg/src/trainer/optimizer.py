from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.utils.errors import PreconditionError

"""
Adam with bias correction, over a list of dense parameter arrays
"""

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


"""
Optimizer state
Attributes:
    first_moment: One accumulator per parameter array
    second_moment: One accumulator per parameter array
    step: Number of updates applied so far
"""
@dataclass(eq=False)
class AdamState:

    first_moment: list[NDArray[np.float64]]
    second_moment: list[NDArray[np.float64]]
    step: int = 0
    beta1: float = BETA1
    beta2: float = BETA2
    epsilon: float = EPSILON

    @classmethod
    def zeros_like(cls, params: list[NDArray[np.float64]]) -> "AdamState":
        return cls(
            first_moment=[np.zeros_like(p) for p in params],
            second_moment=[np.zeros_like(p) for p in params],
        )


"""
Apply one Adam update in place
Args:
    params: Parameter arrays, updated in place
    grads: Gradients, one per parameter (L2 terms already added)
    state: Optimizer state, updated in place
    lr: Learning rate
Returns:
    (params, state)
Raises:
    PreconditionError: Shape mismatch or non-finite gradient
Example:
    >>> state = AdamState.zeros_like([theta])
    >>> adam_step([theta], [grad], state, lr=0.001)
"""
def adam_step(
    params: list[NDArray[np.float64]],
    grads: list[NDArray[np.float64]],
    state: AdamState,
    lr: float
) -> tuple[list[NDArray[np.float64]], AdamState]:
    if len(params) != len(grads) or len(params) != len(state.first_moment):
        raise PreconditionError("params, grads and optimizer state must align")
    for index, (param, grad) in enumerate(zip(params, grads)):
        if param.shape != grad.shape:
            raise PreconditionError(f"gradient {index} has shape {grad.shape}, expected {param.shape}")
        if not np.isfinite(grad).all():
            raise PreconditionError(f"gradient {index} has non-finite entries")

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step

    for param, grad, m, v in zip(params, grads, state.first_moment, state.second_moment):
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        param -= lr * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)

    return params, state
