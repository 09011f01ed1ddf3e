import numpy as np
from numpy.typing import NDArray

from src.data.dataset import DatasetStats, InteractionDataset, ItemGroups
from src.utils.errors import PreconditionError

"""
Dataset statistics and item popularity groups
"""


"""
Summary counts and density |D| / (M * N)
Example:
    >>> compute_stats(ds).density
    0.00084
"""
def compute_stats(ds: InteractionDataset) -> DatasetStats:
    cells = np.float64(ds.num_users) * np.float64(ds.num_items)
    density = float(ds.interaction_count / cells) if cells > 0 else 0.0
    return DatasetStats(
        users=ds.num_users,
        items=ds.num_items,
        interactions=ds.interaction_count,
        density=density,
    )


"""
Partition items into G popularity groups of (nearly) equal interaction mass
Items are sorted by ascending training frequency, ties by ascending id, and cut into
G contiguous runs. The cuts maximize the lightest group subject to every group mass
lying in [L, L + F], where F is the largest item frequency, so
max(group_mass) - min(group_mass) <= F and every group holds at least one item.
Group 0 holds the least popular items, including any item that never occurs in
training. With fewer than G items seen in training, each seen item forms its own
group at the popular end and the unseen items fill the groups below.
Args:
    train: The training split
    num_groups: G
Returns:
    ItemGroups with group ids monotone in item frequency
Raises:
    PreconditionError: G < 1, G larger than the catalog, or an empty training split
Example:
    >>> partition_item_groups(ds, 2).group_mass.tolist()   # frequencies [1, 1, 2, 4]
    [4, 4]
"""
def partition_item_groups(train: InteractionDataset, num_groups: int = 10) -> ItemGroups:
    if num_groups < 1:
        raise PreconditionError(f"num_groups must be >= 1, got {num_groups}")
    if num_groups > train.num_items:
        raise PreconditionError(
            f"num_groups ({num_groups}) exceeds the number of items ({train.num_items})"
        )
    if train.interaction_count == 0:
        raise PreconditionError("cannot group items of an empty training split")

    frequency = np.asarray(train.item_degrees, dtype=np.int64)
    order = np.lexsort((np.arange(train.num_items), frequency))
    sorted_frequency = frequency[order]

    if int((sorted_frequency > 0).sum()) >= num_groups:
        starts = _balanced_cuts(sorted_frequency, num_groups)
    else:
        starts = _sparse_cuts(sorted_frequency, num_groups)

    group_of_sorted = np.repeat(np.arange(num_groups), np.diff(np.append(starts, len(order))))
    group_of_item = np.empty(train.num_items, dtype=np.int64)
    group_of_item[order] = group_of_sorted
    group_mass = np.bincount(group_of_item, weights=frequency, minlength=num_groups).astype(np.int64)
    return ItemGroups(group_of_item=group_of_item, group_mass=group_mass)


"""
Start index of each group in the sorted order, when at least G items have mass
Positions are prefix sums of the sorted frequencies. For a floor L, lo[g] is the
earliest position g groups of mass >= L can end at and hi[g] the latest one g groups
of mass <= L + F can end at; every position in between is reachable because
consecutive positions are at most F apart. The largest L whose lo path still fits
also satisfies the hi condition, so the cuts are rebuilt backwards from the total.
"""
def _balanced_cuts(sorted_frequency: NDArray[np.int64], num_groups: int) -> NDArray[np.int64]:
    prefix = np.concatenate([[0], np.cumsum(sorted_frequency)])
    total = int(prefix[-1])
    cap = int(sorted_frequency[-1])

    def first_at_least(x: int) -> int:
        return int(prefix[np.searchsorted(prefix, x, side="left")])

    def last_at_most(x: int) -> int:
        return int(prefix[np.searchsorted(prefix, x, side="right") - 1])

    def paths(floor: int) -> tuple[list[int], list[int]]:
        lo, hi = [0], [0]
        for _ in range(num_groups - 1):
            if lo[-1] + floor > total:
                return lo, hi
            lo.append(first_at_least(lo[-1] + floor))
            hi.append(last_at_most(min(hi[-1] + floor + cap, total)))
        return lo, hi

    def fits(floor: int) -> bool:
        lo, _ = paths(floor)
        return len(lo) == num_groups and lo[-1] + floor <= total

    """
    Largest feasible floor; fits(1) holds since G items have mass >= 1
    """
    low, high = 1, total
    while low < high:
        mid = (low + high + 1) // 2
        if fits(mid):
            low = mid
        else:
            high = mid - 1

    floor = low
    lo, hi = paths(floor)
    if hi[-1] + floor + cap < total:
        raise PreconditionError("no balanced item partition found")

    ends = [total]
    for g in range(num_groups - 1, 0, -1):
        ends.append(last_at_most(min(hi[g], ends[-1] - floor)))
    ends.reverse()

    """
    A cut after position p starts the next group at the last index with prefix p,
    so unseen items stay in group 0
    """
    cut_positions = np.array(ends[:-1], dtype=np.int64)
    starts = np.searchsorted(prefix, cut_positions, side="right") - 1
    return np.concatenate([[0], starts]).astype(np.int64)


def _sparse_cuts(sorted_frequency: NDArray[np.int64], num_groups: int) -> NDArray[np.int64]:
    count = len(sorted_frequency)
    seen = int((sorted_frequency > 0).sum())
    unseen_groups = num_groups - seen
    starts = list(range(unseen_groups))
    starts.extend(range(count - seen, count))
    return np.array(starts, dtype=np.int64)
