from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from src.utils.errors import PreconditionError

"""
Interaction datasets - The fundamental data structures of the toolkit
An InteractionDataset is the user-item bipartite graph of implicit feedback,
stored twice (user -> items and item -> users) as compressed sparse rows
"""


def _freeze(array: NDArray) -> NDArray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


"""
Immutable user -> item adjacency with its transpose
Attributes:
    num_users: Number of users M (ids are 0..M-1)
    num_items: Number of items N (ids are 0..N-1)
    user_indptr, user_indices: CSR rows of P_u, item ids sorted per user
    item_indptr, item_indices: CSR rows of P_i, user ids sorted per item
    metadata: Provenance (source file, format, duplicates dropped, ...)
    user_ids, item_ids: Raw ids of the source file, indexed by dense id
Example:
    >>> ds = InteractionDataset.from_pairs([0, 0, 1], [1, 2, 0], num_users=2, num_items=3)
    >>> ds.interaction_count
    3
    >>> ds.items_of(0).tolist()
    [1, 2]
"""
@dataclass(frozen=True, eq=False)
class InteractionDataset:

    num_users: int
    num_items: int
    user_indptr: NDArray[np.int64]
    user_indices: NDArray[np.int64]
    item_indptr: NDArray[np.int64]
    item_indices: NDArray[np.int64]
    metadata: dict[str, Any] = field(default_factory=dict)
    user_ids: Optional[NDArray[np.str_]] = None
    item_ids: Optional[NDArray[np.str_]] = None

    def __post_init__(self):
        if self.num_users < 0 or self.num_items < 0:
            raise ValueError("num_users and num_items must be non-negative")
        if len(self.user_indptr) != self.num_users + 1:
            raise ValueError("user_indptr must have num_users + 1 entries")
        if len(self.item_indptr) != self.num_items + 1:
            raise ValueError("item_indptr must have num_items + 1 entries")
        if len(self.user_indices) != len(self.item_indices):
            raise ValueError("user and item adjacency must hold the same interactions")
        if len(self.user_indices) and (
            self.user_indices.min() < 0 or self.user_indices.max() >= self.num_items
        ):
            raise ValueError("item id out of range")
        if len(self.item_indices) and (
            self.item_indices.min() < 0 or self.item_indices.max() >= self.num_users
        ):
            raise ValueError("user id out of range")

    """
    Build a dataset from parallel (user, item) arrays
    Duplicated pairs are dropped; the count is stored in metadata["duplicates_dropped"]
    Args:
        users: User id per interaction
        items: Item id per interaction
        num_users: Number of users (defaults to max id + 1)
        num_items: Number of items (defaults to max id + 1)
        metadata: Optional provenance to attach
        user_ids, item_ids: Optional raw id maps
    Returns:
        A new InteractionDataset
    """
    @classmethod
    def from_pairs(
        cls,
        users,
        items,
        num_users: Optional[int] = None,
        num_items: Optional[int] = None,
        metadata: Optional[dict] = None,
        user_ids: Optional[NDArray[np.str_]] = None,
        item_ids: Optional[NDArray[np.str_]] = None
    ) -> "InteractionDataset":
        users = np.asarray(users, dtype=np.int64).ravel()
        items = np.asarray(items, dtype=np.int64).ravel()
        if users.shape != items.shape:
            raise ValueError("users and items must have the same length")

        if num_users is None:
            num_users = int(users.max()) + 1 if len(users) else 0
        if num_items is None:
            num_items = int(items.max()) + 1 if len(items) else 0
        if len(users) and (users.min() < 0 or users.max() >= num_users):
            raise ValueError("user id out of range")
        if len(items) and (items.min() < 0 or items.max() >= num_items):
            raise ValueError("item id out of range")

        """
        Deduplicate through a single int64 key; np.unique also sorts by (user, item)
        """
        keys = np.unique(users * max(num_items, 1) + items)
        duplicates = len(users) - len(keys)
        u = keys // max(num_items, 1)
        i = keys % max(num_items, 1)

        user_indptr = np.zeros(num_users + 1, dtype=np.int64)
        np.cumsum(np.bincount(u, minlength=num_users), out=user_indptr[1:])

        order = np.lexsort((u, i))
        item_indptr = np.zeros(num_items + 1, dtype=np.int64)
        np.cumsum(np.bincount(i, minlength=num_items), out=item_indptr[1:])

        meta = dict(metadata or {})
        meta["duplicates_dropped"] = meta.get("duplicates_dropped", 0) + int(duplicates)

        return cls(
            num_users=int(num_users),
            num_items=int(num_items),
            user_indptr=_freeze(user_indptr),
            user_indices=_freeze(i),
            item_indptr=_freeze(item_indptr),
            item_indices=_freeze(u[order]),
            metadata=meta,
            user_ids=user_ids,
            item_ids=item_ids,
        )

    @property
    def interaction_count(self) -> int:
        return int(len(self.user_indices))

    def __len__(self) -> int:
        return self.interaction_count

    def items_of(self, user: int) -> NDArray[np.int64]:
        return self.user_indices[self.user_indptr[user]:self.user_indptr[user + 1]]

    def users_of(self, item: int) -> NDArray[np.int64]:
        return self.item_indices[self.item_indptr[item]:self.item_indptr[item + 1]]

    """
    Per-user sorted item lists (P_u)
    """
    @property
    def user_items(self) -> list[NDArray[np.int64]]:
        return [self.items_of(u) for u in range(self.num_users)]

    """
    Per-item sorted user lists (P_i)
    """
    @property
    def item_users(self) -> list[NDArray[np.int64]]:
        return [self.users_of(i) for i in range(self.num_items)]

    @cached_property
    def user_degrees(self) -> NDArray[np.int64]:
        return _freeze(np.diff(self.user_indptr))

    @cached_property
    def item_degrees(self) -> NDArray[np.int64]:
        return _freeze(np.diff(self.item_indptr))

    """
    All interactions as parallel arrays sorted by (user, item)
    """
    def pairs(self) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        users = np.repeat(np.arange(self.num_users, dtype=np.int64), self.user_degrees)
        return users, np.array(self.user_indices)

    def contains(self, user: int, item: int) -> bool:
        row = self.items_of(user)
        pos = np.searchsorted(row, item)
        return bool(pos < len(row) and row[pos] == item)

    """
    The M x N binary interaction matrix, built once on first access
    """
    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.interaction_count, dtype=np.float64)
        return sp.csr_matrix(
            (data, np.array(self.user_indices), np.array(self.user_indptr)),
            shape=(self.num_users, self.num_items),
        )

    """
    Keep a subset of the interactions, preserving the id space
    Args:
        users, items: Interactions to keep (must belong to this dataset)
        metadata: Extra provenance merged into the copy
    Returns:
        A dataset with the same num_users and num_items
    """
    def with_pairs(self, users, items, metadata: Optional[dict] = None) -> "InteractionDataset":
        meta = {k: v for k, v in self.metadata.items() if k != "duplicates_dropped"}
        meta.update(metadata or {})
        return InteractionDataset.from_pairs(
            users,
            items,
            num_users=self.num_users,
            num_items=self.num_items,
            metadata=meta,
            user_ids=self.user_ids,
            item_ids=self.item_ids,
        )

    def __repr__(self) -> str:
        return (
            f"InteractionDataset(num_users={self.num_users}, num_items={self.num_items}, "
            f"interactions={self.interaction_count})"
        )


"""
Train / validation / test parts of one dataset, sharing its id space
"""
@dataclass(frozen=True, eq=False)
class DatasetSplit:

    train: InteractionDataset
    validation: InteractionDataset
    test: InteractionDataset

    def __post_init__(self):
        shapes = {
            (part.num_users, part.num_items)
            for part in (self.train, self.validation, self.test)
        }
        if len(shapes) != 1:
            raise PreconditionError("split parts must share num_users and num_items")

    @property
    def num_users(self) -> int:
        return self.train.num_users

    @property
    def num_items(self) -> int:
        return self.train.num_items


"""
Summary statistics of a dataset
"""
@dataclass(frozen=True)
class DatasetStats:

    users: int
    items: int
    interactions: int
    density: float

    def to_dict(self) -> dict:
        return {
            "users": self.users,
            "items": self.items,
            "interactions": self.interactions,
            "density": self.density,
        }


"""
Popularity groups of items
Attributes:
    group_of_item: Group id per item, 0 is the least popular group
    group_mass: Summed training frequency per group
"""
@dataclass(frozen=True, eq=False)
class ItemGroups:

    group_of_item: NDArray[np.int64]
    group_mass: NDArray[np.int64]

    @property
    def num_groups(self) -> int:
        return int(len(self.group_mass))

    def items_in(self, group: int) -> NDArray[np.int64]:
        return np.flatnonzero(self.group_of_item == group)
