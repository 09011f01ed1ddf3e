from dataclasses import dataclass
from typing import Collection, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from src.data.dataset import ItemGroups
from src.utils.errors import PreconditionError

"""
All-ranking top-K metrics
Ranking sorts by descending score with ties broken by ascending item id, so the
result does not depend on the order in which items are presented
"""


"""
Top-K recommendation list of one user
Attributes:
    user: User id
    items: Ranked candidate ids (excluded items removed)
    k: Requested list length
"""
@dataclass(eq=False)
class RankedList:

    user: int
    items: NDArray[np.int64]
    k: int

    @property
    def short_list(self) -> bool:
        return len(self.items) < self.k

    @property
    def top(self) -> NDArray[np.int64]:
        return self.items[:self.k]


"""
Rank every item of the catalog for one user
Args:
    scores: (N,) item scores
    exclude: Item ids that must not be recommended
    k: List length
    user: User id carried into the result
Returns:
    RankedList of at most k items; shorter (short_list=True) when fewer candidates remain
Example:
    >>> rank_items(np.array([0.1, 0.9, 0.5]), set(), 2).items.tolist()
    [1, 2]
"""
def rank_items(
    scores: NDArray[np.float64],
    exclude: Collection[int],
    k: int,
    user: int = -1
) -> RankedList:
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    scores = np.asarray(scores, dtype=np.float64)
    keep = np.ones(len(scores), dtype=bool)
    if len(exclude):
        keep[np.fromiter(exclude, dtype=np.int64)] = False

    candidates = np.flatnonzero(keep)
    order = np.argsort(-scores[candidates], kind="stable")
    return RankedList(user=user, items=candidates[order[:k]], k=k)


"""
Rank many users at once from a (C, N) score matrix
Excluded entries are pushed to -inf before a stable sort
Args:
    scores: (C, N) scores, one row per user
    exclude_mask: (C, N) True where the item is excluded
    k: List length
Returns:
    (top-k ids of shape (C, min(k, N)), candidate count per row)
"""
def rank_matrix(
    scores: NDArray[np.float64],
    exclude_mask: NDArray[np.bool_],
    k: int
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    masked = np.where(exclude_mask, -np.inf, scores)
    order = np.argsort(-masked, axis=1, kind="stable")[:, :k]
    candidates = (~exclude_mask).sum(axis=1)
    return order, candidates


def _check_relevant(relevant: Collection[int]):
    if len(relevant) == 0:
        raise PreconditionError("relevant set must be non-empty")


"""
Recall@K = |top-K ∩ relevant| / |relevant|
Raises:
    PreconditionError: Empty relevant set (the caller skips such users)
"""
def recall_at_k(ranked: RankedList, relevant: Collection[int]) -> float:
    _check_relevant(relevant)
    hits = np.isin(ranked.top, np.fromiter(relevant, dtype=np.int64)).sum()
    return float(hits / len(relevant))


def _ideal_dcg(count: int) -> float:
    return float((1.0 / np.log2(np.arange(2, count + 2))).sum())


"""
NDCG@K with binary gains and a log2(1 + rank) discount, normalized by the ideal ordering
"""
def ndcg_at_k(ranked: RankedList, relevant: Collection[int]) -> float:
    _check_relevant(relevant)
    hit = np.isin(ranked.top, np.fromiter(relevant, dtype=np.int64))
    ranks = np.flatnonzero(hit) + 1
    dcg = float((1.0 / np.log2(ranks + 1)).sum())
    return dcg / _ideal_dcg(min(len(relevant), ranked.k))


"""
Split Recall@K into popularity-group contributions
Group g receives (1/M) sum_u |hits of u in g| / |relevant_u| over the M users
with a non-empty relevant set, so the vector sums to Recall@K
Args:
    ranked_lists: One RankedList per user
    relevant_sets: Test items per user, aligned with ranked_lists
    groups: Item groups built from the training split
    k: List length
    train_frequency: Optional training frequency per item, used to count cold items
Returns:
    (group recalls, number of relevant items with zero training frequency)
"""
def group_decompose(
    ranked_lists: Sequence[RankedList],
    relevant_sets: Sequence[Collection[int]],
    groups: ItemGroups,
    k: int,
    train_frequency: Optional[NDArray[np.int64]] = None
) -> tuple[NDArray[np.float64], int]:
    totals = np.zeros(groups.num_groups, dtype=np.float64)
    evaluated = 0
    cold = 0

    for ranked, relevant in zip(ranked_lists, relevant_sets):
        if len(relevant) == 0:
            continue
        evaluated += 1
        relevant_ids = np.fromiter(relevant, dtype=np.int64)
        if train_frequency is not None:
            cold += int((train_frequency[relevant_ids] == 0).sum())
        top = ranked.items[:k]
        hits = top[np.isin(top, relevant_ids)]
        totals += np.bincount(groups.group_of_item[hits], minlength=groups.num_groups) / len(relevant)

    if evaluated == 0:
        return totals, cold
    return totals / evaluated, cold
