import logging

import numpy as np

from src.data.dataset import InteractionDataset
from src.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

"""
k-core filtering
Iteratively filter users/items with fewer than k interactions until a fixpoint
"""


"""
Reduce a dataset to its k-core
Surviving users and items are re-indexed densely; raw id maps follow them
Args:
    ds: The dataset to filter
    k: Minimum degree on both sides
Returns:
    The k-core (possibly empty); metadata["kcore_rounds"] records the iterations
Raises:
    PreconditionError: If k < 1
Example:
    >>> core = kcore_filter(ds, 10)
"""
def kcore_filter(ds: InteractionDataset, k: int) -> InteractionDataset:
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")

    users, items = ds.pairs()
    keep = np.ones(len(users), dtype=bool)
    rounds = 0

    while True:
        user_deg = np.bincount(users[keep], minlength=ds.num_users)
        item_deg = np.bincount(items[keep], minlength=ds.num_items)
        survivors = keep & (user_deg[users] >= k) & (item_deg[items] >= k)
        if np.array_equal(survivors, keep):
            break
        keep = survivors
        rounds += 1

    users, items = users[keep], items[keep]

    """
    Compact the id space to the surviving nodes
    """
    user_kept = np.unique(users)
    item_kept = np.unique(items)
    user_map = np.full(ds.num_users, -1, dtype=np.int64)
    item_map = np.full(ds.num_items, -1, dtype=np.int64)
    user_map[user_kept] = np.arange(len(user_kept))
    item_map[item_kept] = np.arange(len(item_kept))

    meta = {k_: v for k_, v in ds.metadata.items() if k_ != "duplicates_dropped"}
    meta["kcore"] = k
    meta["kcore_rounds"] = rounds

    logger.info(
        "%d-core: %d -> %d users, %d -> %d items after %d rounds",
        k, ds.num_users, len(user_kept), ds.num_items, len(item_kept), rounds,
    )

    return InteractionDataset.from_pairs(
        user_map[users],
        item_map[items],
        num_users=len(user_kept),
        num_items=len(item_kept),
        metadata=meta,
        user_ids=ds.user_ids[user_kept] if ds.user_ids is not None else None,
        item_ids=ds.item_ids[item_kept] if ds.item_ids is not None else None,
    )
