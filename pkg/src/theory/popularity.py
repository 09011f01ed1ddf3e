import logging
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from numpy.typing import NDArray

from src.utils.errors import PreconditionError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)

"""
Popularity bias of the sampled softmax at its optimum
With negatives drawn from p_n, the optimal score of an interacted item is
    f* = log_partition - log(1 + N |P_u| p_n(i))
so more frequently sampled items end up with lower scores. The free score
table fit below recovers this by direct minimization
"""


"""
Optimal score of an item under sampled softmax
Args:
    p_n_i: Sampling probability of the item
    num_negatives: N
    pos_count: |P_u|
    log_partition: log(N * E_{j~p_n} e^{f(u,j)})
Returns:
    f*
Example:
    >>> closed_form_score(0.75, 100, 2, 0.0) - closed_form_score(0.25, 100, 2, 0.0)
    -1.0854...
"""
def closed_form_score(p_n_i: float, num_negatives: int, pos_count: int, log_partition: float = 0.0) -> float:
    if not 0.0 <= p_n_i <= 1.0:
        raise PreconditionError(f"p_n_i must be in [0, 1], got {p_n_i}")
    if num_negatives < 1:
        raise PreconditionError(f"num_negatives must be >= 1, got {num_negatives}")
    return float(log_partition - np.log1p(num_negatives * pos_count * p_n_i))


"""
Result of a free score table fit
Attributes:
    scores: (users, items) converged scores
    converged: Whether the final gradient norm fell below the tolerance
    grad_norm: Final gradient norm (of the averaged gradient in sampled mode)
    steps: Steps taken
"""
@dataclass(eq=False)
class FreeScoreFit:
    scores: NDArray[np.float64]
    converged: bool
    grad_norm: float
    steps: int

    """
    Score differences w.r.t. a reference item, per user
    Absolute levels are not identifiable (adding a constant to a user's row
    leaves the loss unchanged), so comparisons use differences
    """
    def differences(self, reference: int = 0) -> NDArray[np.float64]:
        return self.scores - self.scores[:, [reference]]


def _expected_gradient(
    scores: NDArray[np.float64],
    positives: NDArray[np.bool_],
    p_n: NDArray[np.float64],
    num_negatives: int
) -> NDArray[np.float64]:
    shift = scores.max(axis=1, keepdims=True)
    exp_scores = np.exp(scores - shift)
    negative_mass = num_negatives * (exp_scores * p_n).sum(axis=1, keepdims=True)
    denominators = np.where(positives, exp_scores + negative_mass, np.inf)

    grad = -positives.astype(np.float64)
    grad += np.where(positives, exp_scores / denominators, 0.0)
    grad += num_negatives * p_n * exp_scores * (1.0 / denominators).sum(axis=1, keepdims=True)
    return grad


def _sampled_gradient(
    scores: NDArray[np.float64],
    positives: NDArray[np.bool_],
    p_n: NDArray[np.float64],
    num_negatives: int,
    rng: np.random.Generator
) -> NDArray[np.float64]:
    grad = -positives.astype(np.float64)
    shift = scores.max(axis=1, keepdims=True)
    exp_scores = np.exp(scores - shift)

    for user, item in zip(*np.nonzero(positives)):
        counts = rng.multinomial(num_negatives, p_n)
        weights = counts * exp_scores[user]
        denominator = exp_scores[user, item] + weights.sum()
        grad[user] += weights / denominator
        grad[user, item] += exp_scores[user, item] / denominator
    return grad


"""
Minimize the sampled softmax loss over a table of free scores f(u, i)
Per positive (u, i):  -f(u,i) + log(e^{f(u,i)} + sum_j e^{f(u,j)})
negatives="expected" replaces the negative sum by its large-N expectation
N * sum_k p_n(k) e^{f(u,k)} and runs full gradient descent;
negatives="sampled" draws N negatives from p_n every step and returns the
Polyak average of the second half of the iterates
Args:
    p_n: Sampling distribution over items
    num_negatives: N
    interactions: Interacted items per user
    steps: Gradient steps
    lr: Step size
    negatives: "expected" or "sampled"
    seed: Seed of the negative draws
    tolerance: Gradient norm below which the fit counts as converged
Returns:
    FreeScoreFit (scores start at zero, so each row keeps a zero mean)
Raises:
    PreconditionError: Invalid distribution or interactions
"""
def fit_free_score_table(
    p_n: Sequence[float],
    num_negatives: int,
    interactions: Sequence[Sequence[int]],
    steps: int = 5000,
    lr: float = 0.1,
    negatives: Literal["expected", "sampled"] = "expected",
    seed: int = 0,
    tolerance: float = 1e-6
) -> FreeScoreFit:
    p_n = np.asarray(p_n, dtype=np.float64)
    if p_n.ndim != 1 or (p_n < 0).any() or abs(p_n.sum() - 1.0) > 1e-9:
        raise PreconditionError("p_n must be a probability vector")
    if num_negatives < 1:
        raise PreconditionError(f"num_negatives must be >= 1, got {num_negatives}")
    if negatives not in ("expected", "sampled"):
        raise PreconditionError(f"negatives must be expected or sampled, got {negatives!r}")

    num_items = len(p_n)
    positives = np.zeros((len(interactions), num_items), dtype=bool)
    for user, items in enumerate(interactions):
        if len(items) == 0:
            raise PreconditionError(f"user {user} has no interactions")
        positives[user, list(items)] = True

    scores = np.zeros(positives.shape, dtype=np.float64)
    rng = make_rng(seed)

    if negatives == "expected":
        grad = _expected_gradient(scores, positives, p_n, num_negatives)
        step = 0
        for step in range(1, steps + 1):
            scores -= lr * grad
            grad = _expected_gradient(scores, positives, p_n, num_negatives)
            if np.linalg.norm(grad) < tolerance:
                break
        grad_norm = float(np.linalg.norm(grad))
        fit = FreeScoreFit(scores=scores, converged=grad_norm < tolerance, grad_norm=grad_norm, steps=step)
    else:
        burn_in = steps // 2
        average = np.zeros_like(scores)
        mean_grad = np.zeros_like(scores)
        for step in range(1, steps + 1):
            grad = _sampled_gradient(scores, positives, p_n, num_negatives, rng)
            scores -= lr * grad
            if step > burn_in:
                average += scores
                mean_grad += grad
        kept = max(steps - burn_in, 1)
        grad_norm = float(np.linalg.norm(mean_grad / kept))
        fit = FreeScoreFit(
            scores=average / kept,
            converged=grad_norm < max(tolerance, 1e-2),
            grad_norm=grad_norm,
            steps=steps,
        )

    if not fit.converged:
        logger.warning("free score fit did not converge (grad norm %.3e)", fit.grad_norm)
    return fit
