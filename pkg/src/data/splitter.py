import logging
import math

import numpy as np

from src.data.dataset import DatasetSplit, InteractionDataset
from src.utils.errors import PreconditionError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)

"""
DatasetSplitter - Per-user train / validation / test partition
Each user's interactions are shuffled and cut with floor-based rounding:
n_train = floor(r_train * |P_u|), n_val = floor(r_val * |P_u|), the rest goes to test
"""

DEFAULT_RATIOS = (0.7, 0.1, 0.2)

"""
Guards floor() against products such as 0.7 * 10 landing just below an integer
"""
_ROUNDING_SLACK = 1e-9


def _part_sizes(count: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    n_train = math.floor(ratios[0] * count + _ROUNDING_SLACK)
    n_val = math.floor(ratios[1] * count + _ROUNDING_SLACK)
    return n_train, n_val, count - n_train - n_val


"""
Split every user's interactions into train / validation / test
Args:
    ds: The dataset to split (every user needs at least one interaction)
    ratios: (train, validation, test) fractions summing to 1
    seed: Seed of the shuffling stream
Returns:
    DatasetSplit whose parts are disjoint and cover ds
Raises:
    PreconditionError: A user without interactions or invalid ratios
Example:
    >>> split = split_dataset(ds, (0.7, 0.1, 0.2), seed=2022)
"""
def split_dataset(
    ds: InteractionDataset,
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0
) -> DatasetSplit:
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or min(ratios) < 0 or not math.isclose(sum(ratios), 1.0):
        raise PreconditionError(f"ratios must be three non-negative fractions summing to 1, got {ratios}")

    empty = np.flatnonzero(ds.user_degrees == 0)
    if len(empty):
        raise PreconditionError(
            f"{len(empty)} users have no interactions (first: user {int(empty[0])})"
        )

    rng = make_rng(seed)
    parts: list[tuple[list, list]] = [([], []), ([], []), ([], [])]

    for user in range(ds.num_users):
        items = rng.permutation(ds.items_of(user))
        n_train, n_val, _ = _part_sizes(len(items), ratios)
        bounds = (0, n_train, n_train + n_val, len(items))
        for part, (lo, hi) in zip(parts, zip(bounds[:-1], bounds[1:])):
            part[0].extend([user] * (hi - lo))
            part[1].extend(items[lo:hi].tolist())

    train, validation, test = (
        ds.with_pairs(users, items, metadata={"part": name, "split_seed": seed})
        for (users, items), name in zip(parts, ("train", "validation", "test"))
    )

    logger.info(
        "split %d interactions into train=%d validation=%d test=%d (seed %d)",
        ds.interaction_count, train.interaction_count,
        validation.interaction_count, test.interaction_count, seed,
    )
    return DatasetSplit(train=train, validation=validation, test=test)
