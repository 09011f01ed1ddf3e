from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from src.data.dataset import InteractionDataset
from src.utils.errors import PreconditionError

"""
Batch containers shared by losses, samplers and the trainer
Negatives are a padded (B, L) matrix with a validity mask, since in-batch
collisions shrink individual negative lists
"""


"""
Column indices of the other rows of a B-row batch
Row b lists 0..B-1 without b, in increasing order
Example:
    >>> other_rows(3).tolist()
    [[1, 2], [0, 2], [0, 1]]
"""
def other_rows(size: int) -> NDArray[np.int64]:
    cols = np.arange(max(size - 1, 0), dtype=np.int64)[None, :]
    return cols + (cols >= np.arange(size, dtype=np.int64)[:, None])


"""
A mini-batch of positives with their negatives
Attributes:
    users: (B,) anchor users
    pos_items: (B,) positive items
    neg_items: (B, L) negative item ids (padding entries are arbitrary)
    neg_mask: (B, L) True where neg_items holds a real negative
    shared: Row b's negatives are the positives of the other rows in row order,
        neg_items[b] == pos_items[other_rows(B)[b]]; scores then come from one
        (B, B) product instead of gathered negative rows
Example:
    >>> batch = Batch.from_lists([(0, 1), (2, 3)], [[4, 5], [6]])
    >>> batch.negative_counts.tolist()
    [2, 1]
"""
@dataclass(eq=False)
class Batch:

    users: NDArray[np.int64]
    pos_items: NDArray[np.int64]
    neg_items: NDArray[np.int64]
    neg_mask: Optional[NDArray[np.bool_]] = None
    shared: bool = False

    def __post_init__(self):
        self.users = np.asarray(self.users, dtype=np.int64).reshape(-1)
        self.pos_items = np.asarray(self.pos_items, dtype=np.int64).reshape(-1)
        neg = np.asarray(self.neg_items, dtype=np.int64)
        if neg.ndim == 1 and neg.size == 0:
            neg = neg.reshape(len(self.users), 0)
        self.neg_items = neg
        if self.neg_mask is None:
            self.neg_mask = np.ones(self.neg_items.shape, dtype=bool)
        self.neg_mask = np.asarray(self.neg_mask, dtype=bool)

        if len(self.users) != len(self.pos_items):
            raise PreconditionError("users and pos_items must have the same length")
        if self.neg_items.ndim != 2 or self.neg_items.shape[0] != len(self.users):
            raise PreconditionError(f"neg_items must have shape (B, L), got {self.neg_items.shape}")
        if self.neg_mask.shape != self.neg_items.shape:
            raise PreconditionError("neg_mask must match neg_items")
        if self.shared and self.neg_items.shape[1] != len(self.users) - 1:
            raise PreconditionError("a shared-negative batch needs B - 1 negatives per row")

    @property
    def size(self) -> int:
        return len(self.users)

    @property
    def negative_counts(self) -> NDArray[np.int64]:
        return self.neg_mask.sum(axis=1)

    """
    Build a batch from (user, item) pairs and ragged negative lists
    """
    @classmethod
    def from_lists(
        cls,
        positives: Sequence[tuple[int, int]],
        negatives: Sequence[Sequence[int]]
    ) -> "Batch":
        if len(positives) != len(negatives):
            raise PreconditionError("one negative list per positive is required")
        width = max((len(n) for n in negatives), default=0)
        neg_items = np.zeros((len(positives), width), dtype=np.int64)
        neg_mask = np.zeros((len(positives), width), dtype=bool)
        for row, negs in enumerate(negatives):
            neg_items[row, :len(negs)] = negs
            neg_mask[row, :len(negs)] = True
        users = [u for u, _ in positives]
        items = [i for _, i in positives]
        return cls(users=users, pos_items=items, neg_items=neg_items, neg_mask=neg_mask)

    """
    Ragged view of the negatives, one list per positive
    """
    def negative_lists(self) -> list[list[int]]:
        return [row[mask].tolist() for row, mask in zip(self.neg_items, self.neg_mask)]

    """
    Check that every positive is a training interaction
    Raises:
        PreconditionError: Naming the first pair that is not in train
    """
    def validate_positives(self, train: InteractionDataset):
        for user, item in zip(self.users.tolist(), self.pos_items.tolist()):
            if not train.contains(user, item):
                raise PreconditionError(f"({user}, {item}) is not a training interaction")


"""
Scores (or gradients w.r.t. scores) of a batch
Attributes:
    pos: (B,) positive scores
    neg: (B, L) negative scores, meaningful only where the batch mask is set
"""
@dataclass(eq=False)
class BatchScores:

    pos: NDArray[np.float64]
    neg: NDArray[np.float64]
