"""
Losses module - Training losses and their gradients w.r.t. representations.
"""

from src.losses.config import LossConfig, DEFAULT_TEMPERATURE
from src.losses.batch import Batch, BatchScores
from src.losses.functions import similarity, ssm_loss, sm_loss, bpr_loss, bce_loss, ccl_loss
from src.losses.objective import (
    SoftmaxComponents,
    score_batch,
    evaluate_objective,
    grad_wrt_representations,
    cosine_softmax_components,
)

__all__ = [
    "LossConfig",
    "DEFAULT_TEMPERATURE",
    "Batch",
    "BatchScores",
    "similarity",
    "ssm_loss",
    "sm_loss",
    "bpr_loss",
    "bce_loss",
    "ccl_loss",
    "SoftmaxComponents",
    "score_batch",
    "evaluate_objective",
    "grad_wrt_representations",
    "cosine_softmax_components",
]
