import logging

import numpy as np

from src.data.dataset import InteractionDataset
from src.theory.pareto import ParetoParams, pareto_degrees, pareto_sample
from src.utils.errors import PreconditionError
from src.utils.rng import spawn_rngs

logger = logging.getLogger(__name__)

"""
Synthetic power-law interaction graphs
User degrees and item popularity weights both follow a Pareto law, so the
generated data shows the long tail of real implicit-feedback datasets
"""


"""
Generate a Pareto-skewed interaction dataset
Args:
    num_users: M
    num_items: N
    alpha: Pareto tail index of user degrees and item weights
    seed: Seed of the generator
    min_degree: Every user receives at least this many items
Returns:
    InteractionDataset in which every user and every item has an interaction
Example:
    >>> ds = generate_synthetic(500, 300, alpha=1.5, seed=7, min_degree=10)
"""
def generate_synthetic(
    num_users: int,
    num_items: int,
    alpha: float = 1.5,
    seed: int = 0,
    min_degree: int = 1
) -> InteractionDataset:
    if num_users < 1 or num_items < 2:
        raise PreconditionError("need at least one user and two items")
    if not 1 <= min_degree < num_items:
        raise PreconditionError(f"min_degree must be in [1, {num_items}), got {min_degree}")

    degree_rng, weight_rng, choice_rng = spawn_rngs(seed, 3)
    params = ParetoParams(alpha=alpha)

    degrees = pareto_degrees(params, degree_rng, num_users, cap=num_items - 1)
    degrees = np.maximum(degrees * min_degree, min_degree).clip(max=num_items - 1)
    weights = pareto_sample(params, weight_rng, num_items)
    probabilities = weights / weights.sum()

    users: list[np.ndarray] = []
    items: list[np.ndarray] = []
    for user, degree in enumerate(degrees):
        chosen = choice_rng.choice(num_items, size=int(degree), replace=False, p=probabilities)
        users.append(np.full(len(chosen), user, dtype=np.int64))
        items.append(chosen)

    """
    Cover items that were never drawn, so no item is isolated
    """
    drawn = np.zeros(num_items, dtype=bool)
    drawn[np.concatenate(items)] = True
    missing = np.flatnonzero(~drawn)
    if len(missing):
        users.append(choice_rng.integers(0, num_users, size=len(missing)))
        items.append(missing)

    ds = InteractionDataset.from_pairs(
        np.concatenate(users),
        np.concatenate(items),
        num_users=num_users,
        num_items=num_items,
        metadata={"source": "synthetic", "alpha": alpha, "seed": seed},
    )
    logger.info("generated synthetic dataset: %r", ds)
    return ds
