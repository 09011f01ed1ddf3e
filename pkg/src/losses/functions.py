import numpy as np
from numpy.typing import NDArray
from scipy.special import expit

from src.losses.batch import Batch, BatchScores
from src.losses.config import LossConfig
from src.utils.errors import PreconditionError
from src.utils.similarity import NORM_EPSILON

"""
Training losses over batch scores
Every loss returns (mean loss, gradient of the mean loss w.r.t. the scores)
SSM - Sampled softmax over the positive and its negatives
SM - Full softmax over the whole catalog
BPR - Pairwise logistic loss with one negative
BCE - Pointwise binary cross-entropy
CCL - Cosine contrastive loss with margin and negative weight
"""


def _softplus(x: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


"""
Similarity score f(u, i) of one user/item pair
Args:
    z_u: User representation
    z_i: Item representation
    cfg: Loss configuration (similarity kind and temperature)
Returns:
    Inner product, or cosine divided by tau (raw cosine for CCL)
Raises:
    PreconditionError: Non-finite input
Example:
    >>> similarity(np.array([1.0, 2.0]), np.array([3.0, 4.0]), LossConfig(similarity="inner_product"))
    11.0
"""
def similarity(z_u: NDArray[np.float64], z_i: NDArray[np.float64], cfg: LossConfig) -> float:
    z_u = np.asarray(z_u, dtype=np.float64)
    z_i = np.asarray(z_i, dtype=np.float64)
    if not (np.isfinite(z_u).all() and np.isfinite(z_i).all()):
        raise PreconditionError("similarity inputs must be finite")
    if cfg.similarity == "inner_product":
        return float(np.dot(z_u, z_i))

    norm_u, norm_i = np.linalg.norm(z_u), np.linalg.norm(z_i)
    if norm_u < NORM_EPSILON or norm_i < NORM_EPSILON:
        return 0.0
    return float(np.dot(z_u, z_i) / (norm_u * norm_i) * cfg.score_scale)


"""
Sampled softmax loss
loss = mean over positives of  log(e^f_i + sum_j e^f_j) - f_i
Args:
    batch: Positives with their negative lists
    scores: Positive and negative scores
    allow_empty: Accept positives whose negative list is empty (in-batch
        collisions); they contribute zero loss and zero gradient
Returns:
    (loss, gradients w.r.t. scores)
Raises:
    PreconditionError: An empty negative list when allow_empty is False
"""
def ssm_loss(batch: Batch, scores: BatchScores, allow_empty: bool = False) -> tuple[float, BatchScores]:
    counts = batch.negative_counts
    if not allow_empty and (counts == 0).any():
        raise PreconditionError("sampled softmax needs at least one negative per positive")

    size = batch.size
    logits = np.concatenate(
        [scores.pos[:, None], np.where(batch.neg_mask, scores.neg, -np.inf)], axis=1
    )
    shift = logits.max(axis=1, keepdims=True)
    exps = np.exp(logits - shift)
    partition = exps.sum(axis=1, keepdims=True)
    log_partition = shift[:, 0] + np.log(partition[:, 0])
    losses = log_partition - scores.pos

    """
    Softmax probabilities P_uk over {i} and the negatives
    """
    probs = exps / partition
    grad_pos = (probs[:, 0] - 1.0) / size
    grad_neg = np.where(batch.neg_mask, probs[:, 1:], 0.0) / size
    return float(losses.mean()), BatchScores(pos=grad_pos, neg=grad_neg)


"""
Full softmax loss over the catalog
Args:
    batch: Positives (negatives are ignored)
    all_item_scores: (B, N) scores of every item for each anchor
Returns:
    (loss, (B, N) gradient w.r.t. the catalog scores)
Raises:
    PreconditionError: Catalog scores missing or too narrow for the positives
"""
def sm_loss(batch: Batch, all_item_scores: NDArray[np.float64]) -> tuple[float, NDArray[np.float64]]:
    all_item_scores = np.asarray(all_item_scores, dtype=np.float64)
    if all_item_scores.ndim != 2 or all_item_scores.shape[0] != batch.size:
        raise PreconditionError("softmax needs scores for the full catalog of every positive")
    if batch.size and batch.pos_items.max() >= all_item_scores.shape[1]:
        raise PreconditionError("catalog scores do not cover the positive items")

    rows = np.arange(batch.size)
    shift = all_item_scores.max(axis=1, keepdims=True)
    exps = np.exp(all_item_scores - shift)
    partition = exps.sum(axis=1, keepdims=True)
    log_partition = shift[:, 0] + np.log(partition[:, 0])
    losses = log_partition - all_item_scores[rows, batch.pos_items]

    grad = exps / partition
    grad[rows, batch.pos_items] -= 1.0
    return float(losses.mean()), grad / batch.size


"""
BPR loss: mean of -log sigmoid(f_i - f_j)
Raises:
    PreconditionError: Any positive without exactly one negative
"""
def bpr_loss(batch: Batch, scores: BatchScores) -> tuple[float, BatchScores]:
    if batch.neg_items.shape[1] != 1 or not batch.neg_mask.all():
        raise PreconditionError("BPR needs exactly one negative per positive")

    diff = scores.pos - scores.neg[:, 0]
    weight = expit(-diff) / batch.size
    return (
        float(_softplus(-diff).mean()),
        BatchScores(pos=-weight, neg=weight[:, None]),
    )


"""
Binary cross-entropy over positives and negatives
loss = (sum softplus(-f+) + sum softplus(f-)) / (number of positives + negatives)
"""
def bce_loss(batch: Batch, scores: BatchScores) -> tuple[float, BatchScores]:
    total = batch.size + int(batch.neg_mask.sum())
    if total == 0:
        raise PreconditionError("empty batch")

    pos_terms = _softplus(-scores.pos)
    neg_terms = np.where(batch.neg_mask, _softplus(scores.neg), 0.0)
    loss = (pos_terms.sum() + neg_terms.sum()) / total

    grad_pos = -expit(-scores.pos) / total
    grad_neg = np.where(batch.neg_mask, expit(scores.neg), 0.0) / total
    return float(loss), BatchScores(pos=grad_pos, neg=grad_neg)


"""
Cosine contrastive loss
loss = mean of  1 - f_i + (w / |N|) sum_j max(0, f_j - m)
The hinge subgradient at f_j = m is 0
Args:
    batch: Positives with negatives
    scores: Raw cosine (or raw inner product) scores
    margin: m
    weight: w
    allow_empty: Accept positives without negatives (only the 1 - f_i term remains)
"""
def ccl_loss(
    batch: Batch,
    scores: BatchScores,
    margin: float,
    weight: float,
    allow_empty: bool = False
) -> tuple[float, BatchScores]:
    counts = batch.negative_counts
    if not allow_empty and (counts == 0).any():
        raise PreconditionError("CCL needs at least one negative per positive")

    per_negative = np.where(counts > 0, weight / np.maximum(counts, 1), 0.0)
    active = batch.neg_mask & (scores.neg > margin)
    hinge = np.where(active, scores.neg - margin, 0.0).sum(axis=1)
    losses = 1.0 - scores.pos + per_negative * hinge

    grad_pos = np.full(batch.size, -1.0 / batch.size)
    grad_neg = np.where(active, per_negative[:, None], 0.0) / batch.size
    return float(losses.mean()), BatchScores(pos=grad_pos, neg=grad_neg)
