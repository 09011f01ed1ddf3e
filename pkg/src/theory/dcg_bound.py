from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from src.utils.errors import PreconditionError

"""
Sampled softmax as a bound on ranking quality
For a single positive i among candidates I:
    -log DCG = log log2(1 + rank(i)) <= log rank(i) <= -log softmax_i(f)
rank(i) counts only candidates scoring strictly higher than i
"""

BOUND_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DcgBoundResult:
    lhs: float
    rank_term: float
    rhs: float
    rank: int
    ok: bool


"""
Check the DCG chain for one candidate set
Args:
    scores: Scores of all candidates
    positive: Index of the positive inside scores
Returns:
    DcgBoundResult with lhs = -log DCG, rank_term = log rank, rhs = softmax loss
Example:
    >>> dcg_bound_check(np.array([1.0, 0.0]), 0).rhs
    0.3132...
"""
def dcg_bound_check(scores: NDArray[np.float64], positive: int) -> DcgBoundResult:
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or len(scores) < 1:
        raise PreconditionError("scores must be a non-empty vector")
    if not 0 <= positive < len(scores):
        raise PreconditionError(f"positive index {positive} out of range")

    rank = 1 + int((scores - scores[positive] > 0).sum())
    lhs = float(np.log(np.log2(1.0 + rank)))
    rank_term = float(np.log(rank))
    rhs = float(logsumexp(scores) - scores[positive])
    ok = lhs <= rank_term + BOUND_TOLERANCE and rank_term <= rhs + BOUND_TOLERANCE
    return DcgBoundResult(lhs=lhs, rank_term=rank_term, rhs=rhs, rank=rank, ok=ok)


"""
Randomized bound check over many candidate sets
Args:
    trials: Number of candidate sets
    rng: Random generator
    min_size, max_size: Range of |I|
Returns:
    (violations, largest amount by which a link of the chain was exceeded)
"""
def random_dcg_trials(
    trials: int,
    rng: np.random.Generator,
    min_size: int = 2,
    max_size: int = 50
) -> tuple[int, float]:
    violations = 0
    worst = 0.0
    for _ in range(trials):
        size = int(rng.integers(min_size, max_size + 1))
        scores = rng.normal(0.0, rng.uniform(0.1, 5.0), size=size)
        result = dcg_bound_check(scores, int(rng.integers(0, size)))
        violations += int(not result.ok)
        worst = max(worst, result.lhs - result.rank_term, result.rank_term - result.rhs)
    return violations, max(worst, 0.0)
