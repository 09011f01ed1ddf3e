from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from src.losses.batch import Batch, BatchScores, other_rows
from src.losses.config import LossConfig
from src.losses.functions import bce_loss, bpr_loss, ccl_loss, sm_loss, ssm_loss
from src.models.embedding_table import Representations
from src.utils.errors import PreconditionError
from src.utils.similarity import normalize_rows, unit_vector_backward

"""
Losses as functions of the representations
Scores are computed from gathered rows, the loss gradient w.r.t. the scores is
pulled back through the similarity (and the cosine normalization), and the
per-row gradients are scatter-added into full-size user/item gradient tables
Shared in-batch negatives never gather a (B, B-1, d) block: every score is an
entry of one (B, B) product and both gradient sides are (B, B) @ (B, d) products
"""


"""
Gathered rows of one batch, with their unit vectors under cosine
"""
@dataclass(eq=False)
class _Gathered:
    z_u: NDArray[np.float64]
    z_i: NDArray[np.float64]
    z_j: NDArray[np.float64]
    s_u: NDArray[np.float64]
    s_i: NDArray[np.float64]
    s_j: NDArray[np.float64]
    n_u: NDArray[np.float64]
    n_i: NDArray[np.float64]
    n_j: NDArray[np.float64]


def _gather(cfg: LossConfig, batch: Batch, reps: Representations) -> _Gathered:
    z_u = reps.z_user[batch.users]
    z_i = reps.z_item[batch.pos_items]
    z_j = reps.z_item[batch.neg_items]
    if cfg.similarity == "cosine":
        s_u, n_u = normalize_rows(z_u)
        s_i, n_i = normalize_rows(z_i)
        s_j, n_j = normalize_rows(z_j)
    else:
        s_u, s_i, s_j = z_u, z_i, z_j
        n_u = n_i = n_j = None
    return _Gathered(z_u, z_i, z_j, s_u, s_i, s_j, n_u, n_i, n_j)


def _batch_scores(cfg: LossConfig, rows: _Gathered) -> BatchScores:
    scale = cfg.score_scale
    pos = np.einsum("bd,bd->b", rows.s_u, rows.s_i) * scale
    neg = np.einsum("bd,bld->bl", rows.s_u, rows.s_j) * scale
    return BatchScores(pos=pos, neg=neg)



"""
Representations of the anchors and positives of a shared-negative batch
"""
def _shared_rows(cfg: LossConfig, batch: Batch, reps: Representations):
    z_u = reps.z_user[batch.users]
    z_i = reps.z_item[batch.pos_items]
    if cfg.similarity == "cosine":
        s_u, n_u = normalize_rows(z_u)
        s_i, n_i = normalize_rows(z_i)
        return s_u, s_i, n_u, n_i
    return z_u, z_i, None, None


def _shared_scores(cfg: LossConfig, s_u: NDArray, s_i: NDArray) -> BatchScores:
    matrix = s_u @ s_i.T * cfg.score_scale
    neg = np.take_along_axis(matrix, other_rows(len(matrix)), axis=1)
    return BatchScores(pos=np.diagonal(matrix).copy(), neg=neg)


"""
Scores of a batch under the configured similarity
"""
def score_batch(cfg: LossConfig, batch: Batch, reps: Representations) -> BatchScores:
    if batch.shared:
        s_u, s_i, _, _ = _shared_rows(cfg, batch, reps)
        return _shared_scores(cfg, s_u, s_i)
    return _batch_scores(cfg, _gather(cfg, batch, reps))


def _catalog_scores(cfg: LossConfig, batch: Batch, reps: Representations):
    z_u = reps.z_user[batch.users]
    if cfg.similarity == "cosine":
        s_u, n_u = normalize_rows(z_u)
        s_all, n_all = normalize_rows(reps.z_item)
    else:
        s_u, s_all, n_u, n_all = z_u, reps.z_item, None, None
    return s_u @ s_all.T * cfg.score_scale, (s_u, s_all, n_u, n_all)


def _batch_loss(cfg: LossConfig, batch: Batch, scores: BatchScores, allow_empty: bool):
    if cfg.kind == "SSM":
        return ssm_loss(batch, scores, allow_empty=allow_empty)
    if cfg.kind == "BPR":
        return bpr_loss(batch, scores)
    if cfg.kind == "BCE":
        return bce_loss(batch, scores)
    if cfg.kind == "CCL":
        return ccl_loss(batch, scores, cfg.ccl_margin, cfg.ccl_weight, allow_empty=allow_empty)
    raise PreconditionError(f"unsupported loss kind {cfg.kind!r}")


"""
Loss value only, for finite-difference oracles
"""
def evaluate_objective(
    cfg: LossConfig,
    batch: Batch,
    reps: Representations,
    allow_empty: bool = False
) -> float:
    if cfg.kind == "SM":
        scores, _ = _catalog_scores(cfg, batch, reps)
        return sm_loss(batch, scores)[0]
    return _batch_loss(cfg, batch, score_batch(cfg, batch, reps), allow_empty)[0]


"""
Loss and its analytic gradient w.r.t. every user and item representation
Under cosine similarity the gradient of each vector is its unit-vector
gradient projected onto the tangent space and divided by the norm, so it is
orthogonal to the vector itself; zero-norm vectors receive zero gradient
Args:
    cfg: Loss configuration
    batch: Positives and negatives (SM ignores the negatives)
    reps: Current representations
    allow_empty: Let positives with no negatives through (in-batch collisions)
Returns:
    (loss, gradients shaped like reps, number of positives without negatives)
Example:
    >>> loss, grads, flagged = grad_wrt_representations(cfg, batch, reps, allow_empty=True)
"""
def grad_wrt_representations(
    cfg: LossConfig,
    batch: Batch,
    reps: Representations,
    allow_empty: bool = False
) -> tuple[float, Representations, int]:
    grad_user = np.zeros_like(reps.z_user)
    grad_item = np.zeros_like(reps.z_item)
    scale = cfg.score_scale

    if cfg.kind == "SM":
        scores, (s_u, s_all, n_u, n_all) = _catalog_scores(cfg, batch, reps)
        loss, grad_scores = sm_loss(batch, scores)
        g_su = scale * grad_scores @ s_all
        g_sall = scale * grad_scores.T @ s_u
        if cfg.similarity == "cosine":
            g_su = unit_vector_backward(g_su, s_u, n_u)
            g_sall = unit_vector_backward(g_sall, s_all, n_all)
        np.add.at(grad_user, batch.users, g_su)
        grad_item += g_sall
        return loss, Representations(z_user=grad_user, z_item=grad_item), 0

    if batch.shared:
        s_u, s_i, n_u, n_i = _shared_rows(cfg, batch, reps)
        loss, grad_scores = _batch_loss(cfg, batch, _shared_scores(cfg, s_u, s_i), allow_empty)
        d_neg = np.where(batch.neg_mask, grad_scores.neg, 0.0) * scale

        """
        Row b, column c holds dL/d(s_u[b] . s_i[c])
        """
        grad_matrix = np.zeros((batch.size, batch.size))
        np.put_along_axis(grad_matrix, other_rows(batch.size), d_neg, axis=1)
        np.fill_diagonal(grad_matrix, grad_scores.pos * scale)
        g_u = grad_matrix @ s_i
        g_i = grad_matrix.T @ s_u
        if cfg.similarity == "cosine":
            g_u = unit_vector_backward(g_u, s_u, n_u)
            g_i = unit_vector_backward(g_i, s_i, n_i)
        np.add.at(grad_user, batch.users, g_u)
        np.add.at(grad_item, batch.pos_items, g_i)
        flagged = int((batch.negative_counts == 0).sum())
        return loss, Representations(z_user=grad_user, z_item=grad_item), flagged

    rows = _gather(cfg, batch, reps)
    scores = _batch_scores(cfg, rows)
    loss, grad_scores = _batch_loss(cfg, batch, scores, allow_empty)
    flagged = int((batch.negative_counts == 0).sum())

    d_pos = grad_scores.pos * scale
    d_neg = np.where(batch.neg_mask, grad_scores.neg, 0.0) * scale

    g_u = d_pos[:, None] * rows.s_i + np.einsum("bl,bld->bd", d_neg, rows.s_j)
    g_i = d_pos[:, None] * rows.s_u
    g_j = d_neg[:, :, None] * rows.s_u[:, None, :]

    if cfg.similarity == "cosine":
        g_u = unit_vector_backward(g_u, rows.s_u, rows.n_u)
        g_i = unit_vector_backward(g_i, rows.s_i, rows.n_i)
        g_j = unit_vector_backward(g_j, rows.s_j, rows.n_j)

    np.add.at(grad_user, batch.users, g_u)
    np.add.at(grad_item, batch.pos_items, g_i)
    np.add.at(grad_item, batch.neg_items[batch.neg_mask], g_j[batch.neg_mask])
    return loss, Representations(z_user=grad_user, z_item=grad_item), flagged


"""
Per-item terms of the cosine softmax gradient for one anchor
Attributes:
    c_pos: c(i) = (P_i - 1)(s_i - (s_u . s_i) s_u)
    c_neg: (L, d) rows c(j) = P_j (s_j - (s_u . s_j) s_u)
    probabilities: (L + 1,) softmax probabilities, positive first
    partition: Z_u = e^{f_i} + sum_j e^{f_j}
    neg_similarity: (L,) raw cosines x = s_u . s_j
"""
@dataclass(eq=False)
class SoftmaxComponents:
    c_pos: NDArray[np.float64]
    c_neg: NDArray[np.float64]
    probabilities: NDArray[np.float64]
    partition: float
    neg_similarity: NDArray[np.float64]


"""
Decompose the cosine sampled-softmax gradient of one anchor
The user gradient equals (c(i) + sum_j c(j)) / (tau ||z_u||)
Args:
    z_user: (d,) anchor representation
    z_pos: (d,) positive item representation
    z_negs: (L, d) negative item representations
    temperature: tau
"""
def cosine_softmax_components(
    z_user: NDArray[np.float64],
    z_pos: NDArray[np.float64],
    z_negs: NDArray[np.float64],
    temperature: float
) -> SoftmaxComponents:
    if temperature <= 0:
        raise PreconditionError(f"temperature must be > 0, got {temperature}")
    s_u, _ = normalize_rows(np.asarray(z_user, dtype=np.float64)[None, :])
    s_i, _ = normalize_rows(np.asarray(z_pos, dtype=np.float64)[None, :])
    s_j, _ = normalize_rows(np.atleast_2d(np.asarray(z_negs, dtype=np.float64)))
    s_u, s_i = s_u[0], s_i[0]

    x_pos = float(s_u @ s_i)
    x_neg = s_j @ s_u
    exps = np.exp(np.concatenate([[x_pos], x_neg]) / temperature)
    partition = float(exps.sum())
    probs = exps / partition

    c_pos = (probs[0] - 1.0) * (s_i - x_pos * s_u)
    c_neg = probs[1:, None] * (s_j - x_neg[:, None] * s_u[None, :])
    return SoftmaxComponents(
        c_pos=c_pos,
        c_neg=c_neg,
        probabilities=probs,
        partition=partition,
        neg_similarity=x_neg,
    )
