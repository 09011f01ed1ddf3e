import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from src.data.dataset import DatasetSplit, ItemGroups
from src.evaluation.metrics import RankedList, group_decompose, ndcg_at_k, rank_matrix, recall_at_k
from src.models.embedding_table import Representations
from src.utils.errors import PreconditionError
from src.utils.similarity import normalize_rows

logger = logging.getLogger(__name__)

"""
Evaluator - All-ranking evaluation of representations on the validation or test part
"""

Target = Literal["validation", "test"]
InferenceSimilarity = Literal["inner_product", "cosine"]

CSV_FIELDS = ("target", "k", "recall", "ndcg", "users_evaluated", "users_skipped", "group_recall")


"""
Result of one evaluation
Attributes:
    recall: Mean Recall@K over evaluated users
    ndcg: Mean NDCG@K over evaluated users
    group_recall: Per-group contributions, summing to recall
    k: K
    users_evaluated: Users with a non-empty relevant set
    users_skipped: Users without relevant items
    short_lists: Users with fewer than K candidates
    cold_test_items: Relevant items never seen in training (counted in group 0)
"""
@dataclass
class EvalReport:

    recall: float
    ndcg: float
    group_recall: list[float]
    k: int
    users_evaluated: int = 0
    users_skipped: int = 0
    short_lists: int = 0
    cold_test_items: int = 0
    target: str = "test"
    similarity: str = "inner_product"
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    """
    One CSV row in CSV_FIELDS order; group recalls are joined with ";"
    """
    def to_csv_row(self) -> list[str]:
        return [
            self.target,
            str(self.k),
            f"{self.recall:.6f}",
            f"{self.ndcg:.6f}",
            str(self.users_evaluated),
            str(self.users_skipped),
            ";".join(f"{g:.6f}" for g in self.group_recall),
        ]


def _score_chunk(
    reps: Representations,
    users: NDArray[np.int64],
    item_matrix: NDArray[np.float64],
    similarity: str
) -> NDArray[np.float64]:
    user_matrix = reps.z_user[users]
    if similarity == "cosine":
        user_matrix, _ = normalize_rows(user_matrix)
    return user_matrix @ item_matrix.T


"""
Evaluate representations with the all-ranking protocol
Validation excludes training positives; test excludes training and validation positives
Args:
    reps: Final user/item representations
    split: The dataset split
    groups: Item popularity groups of the training split
    k: List length
    similarity: Inference similarity (inner product by default)
    target: "validation" or "test"
    chunk_size: Users scored per matrix product
Returns:
    EvalReport
Example:
    >>> report = evaluate(reps, split, groups, k=20)
    >>> abs(sum(report.group_recall) - report.recall) < 1e-12
    True
"""
def evaluate(
    reps: Representations,
    split: DatasetSplit,
    groups: ItemGroups,
    k: int = 20,
    similarity: InferenceSimilarity = "inner_product",
    target: Target = "test",
    chunk_size: int = 1024
) -> EvalReport:
    if target not in ("validation", "test"):
        raise PreconditionError(f"target must be validation or test, got {target!r}")
    if reps.z_user.shape[0] != split.num_users or reps.z_item.shape[0] != split.num_items:
        raise PreconditionError("representations do not match the split")

    truth = split.validation if target == "validation" else split.test
    excluded = split.train.adjacency
    if target == "test":
        excluded = excluded + split.validation.adjacency

    item_matrix = reps.z_item
    if similarity == "cosine":
        item_matrix, _ = normalize_rows(item_matrix)

    users = np.flatnonzero(truth.user_degrees > 0)
    skipped = split.num_users - len(users)
    ranked_lists: list[RankedList] = []
    relevant_sets: list[NDArray[np.int64]] = []
    short_lists = 0

    for start in range(0, len(users), chunk_size):
        chunk = users[start:start + chunk_size]
        scores = _score_chunk(reps, chunk, item_matrix, similarity)
        mask = excluded[chunk].toarray() > 0
        order, candidates = rank_matrix(scores, mask, k)

        for row, user in enumerate(chunk.tolist()):
            count = int(min(k, candidates[row]))
            short_lists += int(candidates[row] < k)
            ranked_lists.append(RankedList(user=user, items=order[row, :count], k=k))
            relevant_sets.append(truth.items_of(user))

    if ranked_lists:
        recall = float(np.mean([recall_at_k(r, rel) for r, rel in zip(ranked_lists, relevant_sets)]))
        ndcg = float(np.mean([ndcg_at_k(r, rel) for r, rel in zip(ranked_lists, relevant_sets)]))
    else:
        recall = ndcg = 0.0

    group_recall, cold = group_decompose(
        ranked_lists, relevant_sets, groups, k, train_frequency=split.train.item_degrees
    )

    report = EvalReport(
        recall=recall,
        ndcg=ndcg,
        group_recall=group_recall.tolist(),
        k=k,
        users_evaluated=len(ranked_lists),
        users_skipped=skipped,
        short_lists=short_lists,
        cold_test_items=cold,
        target=target,
        similarity=similarity,
    )
    logger.info(
        "%s recall@%d=%.4f ndcg@%d=%.4f (%d users, %d skipped, %d cold items)",
        target, k, recall, k, ndcg, report.users_evaluated, skipped, cold,
    )
    return report


"""
Mean L2 norm of item representations per popularity group
Empty groups report NaN
"""
def magnitude_by_group(reps: Representations, groups: ItemGroups) -> NDArray[np.float64]:
    norms = np.linalg.norm(reps.z_item, axis=1)
    sums = np.bincount(groups.group_of_item, weights=norms, minlength=groups.num_groups)
    counts = np.bincount(groups.group_of_item, minlength=groups.num_groups)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)

