"""
Evaluation module - All-ranking top-K metrics and long-tail decomposition.
"""

from src.evaluation.metrics import (
    RankedList,
    rank_items,
    rank_matrix,
    recall_at_k,
    ndcg_at_k,
    group_decompose,
)
from src.evaluation.evaluator import EvalReport, CSV_FIELDS, evaluate, magnitude_by_group

__all__ = [
    "RankedList",
    "rank_items",
    "rank_matrix",
    "recall_at_k",
    "ndcg_at_k",
    "group_decompose",
    "EvalReport",
    "CSV_FIELDS",
    "evaluate",
    "magnitude_by_group",
]
