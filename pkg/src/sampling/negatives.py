import numpy as np
from numpy.typing import NDArray

from src.data.dataset import InteractionDataset
from src.losses.batch import other_rows
from src.utils.errors import PreconditionError

"""
Negative sampling primitives
Uniform sampling draws from the complement of P_u with replacement; in-batch
sharing reuses the positives of the other anchors of a mini-batch
"""


"""
Draw n items uniformly from the items user u never interacted with
The k-th non-interacted item is k plus the number of interacted items that
precede it, found by a binary search over (P_u[r] - r)
Args:
    u: User id
    n: Number of draws (with replacement)
    train: Training interactions
    rng: Random generator
Returns:
    (n,) item ids
Raises:
    PreconditionError: The user interacted with every item
Example:
    >>> sample_uniform(0, 3, train, np.random.default_rng(0))
"""
def sample_uniform(u: int, n: int, train: InteractionDataset, rng: np.random.Generator) -> NDArray[np.int64]:
    positives = train.items_of(u)
    complement = train.num_items - len(positives)
    if complement <= 0:
        raise PreconditionError(f"user {u} interacted with every item, no negative exists")
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")

    ranks = rng.integers(0, complement, size=n)
    shifted = positives - np.arange(len(positives))
    return (ranks + np.searchsorted(shifted, ranks, side="right")).astype(np.int64)


"""
Vectorized uniform sampling for many users at once
Args:
    users: (B,) user ids
    n: Draws per user
    train: Training interactions
    rng: Random generator
Returns:
    (B, n) item ids, row b drawn from the complement of P_{users[b]}
"""
def sample_uniform_many(
    users: NDArray[np.int64],
    n: int,
    train: InteractionDataset,
    rng: np.random.Generator
) -> NDArray[np.int64]:
    users = np.asarray(users, dtype=np.int64)
    degrees = train.user_degrees[users]
    complement = train.num_items - degrees
    if (complement <= 0).any():
        full = int(users[np.argmax(complement <= 0)])
        raise PreconditionError(f"user {full} interacted with every item, no negative exists")

    ranks = rng.integers(0, complement[:, None], size=(len(users), n))

    """
    One globally sorted key array: row offset u * (N + 1) plus (P_u[r] - r)
    """
    stride = train.num_items + 1
    all_users, all_items = train.pairs()
    within = np.arange(train.interaction_count) - train.user_indptr[all_users]
    keys = all_users * stride + (all_items - within)
    query = users[:, None] * stride + ranks
    preceding = np.searchsorted(keys, query, side="right") - train.user_indptr[users][:, None]
    return (ranks + preceding).astype(np.int64)


"""
Negatives of every anchor from the other positives of the batch
Anchor b gets the items of the other B-1 positives, minus copies of its own item
Args:
    pos_items: (B,) positive items of the batch
Returns:
    (neg_items, neg_mask) of shape (B, B-1)
Raises:
    PreconditionError: B < 2
"""
def in_batch_negative_matrix(pos_items: NDArray[np.int64]) -> tuple[NDArray[np.int64], NDArray[np.bool_]]:
    pos_items = np.asarray(pos_items, dtype=np.int64)
    size = len(pos_items)
    if size < 2:
        raise PreconditionError(f"in-batch negatives need a batch of at least 2, got {size}")

    neg_items = pos_items[other_rows(size)]
    neg_mask = neg_items != pos_items[:, None]
    return neg_items, neg_mask


"""
List form of in-batch negatives
Example:
    >>> in_batch_negatives([(0, 10), (1, 11), (2, 12)])
    [[11, 12], [10, 12], [10, 11]]
"""
def in_batch_negatives(batch_positives: list[tuple[int, int]]) -> list[list[int]]:
    items = np.array([item for _, item in batch_positives], dtype=np.int64)
    neg_items, neg_mask = in_batch_negative_matrix(items)
    return [row[mask].tolist() for row, mask in zip(neg_items, neg_mask)]


"""
Monte Carlo estimate of how often each item appears as an in-batch negative
Batches are drawn uniformly without replacement from the training interactions
Args:
    train: Training interactions
    batch_size: B
    batches: Number of simulated batches
    rng: Random generator
Returns:
    (N,) share of all negative slots taken by each item (sums to 1)
"""
def inclusion_frequencies(
    train: InteractionDataset,
    batch_size: int,
    batches: int,
    rng: np.random.Generator
) -> NDArray[np.float64]:
    if batch_size > train.interaction_count:
        raise PreconditionError("batch_size exceeds the number of interactions")
    _, all_items = train.pairs()
    counts = np.zeros(train.num_items, dtype=np.float64)

    for _ in range(batches):
        chosen = all_items[rng.choice(train.interaction_count, size=batch_size, replace=False)]
        neg_items, neg_mask = in_batch_negative_matrix(chosen)
        counts += np.bincount(neg_items[neg_mask], minlength=train.num_items)

    total = counts.sum()
    return counts / total if total > 0 else counts
