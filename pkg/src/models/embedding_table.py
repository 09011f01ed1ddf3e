import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from src.utils.errors import DataFormatError, PreconditionError
from src.utils.rng import make_rng

"""
EmbeddingTable - Layer-0 user and item vectors, and their binary checkpoint format
Representations - Final vectors a recommender produces from an EmbeddingTable
"""

MAGIC = b"SSMEMB\x00\x00"
FORMAT_VERSION = 1
HEADER = struct.Struct("<8sIQQQ")
FLOAT_DTYPE = np.dtype("<f8")


"""
User and item ID embeddings p_u^(0) and q_i^(0)
The same container also carries gradients w.r.t. the tables
Attributes:
    user_vecs: M x d matrix
    item_vecs: N x d matrix
    metadata: Initialization details (scheme, seed, bound)
Example:
    >>> table = init_xavier(3, 4, 8, seed=1)
    >>> table.user_vecs.shape
    (3, 8)
"""
@dataclass(eq=False)
class EmbeddingTable:

    user_vecs: NDArray[np.float64]
    item_vecs: NDArray[np.float64]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.user_vecs = np.asarray(self.user_vecs, dtype=np.float64)
        self.item_vecs = np.asarray(self.item_vecs, dtype=np.float64)
        if self.user_vecs.ndim != 2 or self.item_vecs.ndim != 2:
            raise ValueError("embedding tables must be 2D")
        if self.user_vecs.shape[1] != self.item_vecs.shape[1]:
            raise ValueError("user and item vectors must share the dimension")
        if self.user_vecs.shape[1] < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def dim(self) -> int:
        return int(self.user_vecs.shape[1])

    @property
    def num_users(self) -> int:
        return int(self.user_vecs.shape[0])

    @property
    def num_items(self) -> int:
        return int(self.item_vecs.shape[0])

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.user_vecs).all() and np.isfinite(self.item_vecs).all())

    def copy(self) -> "EmbeddingTable":
        return EmbeddingTable(
            user_vecs=self.user_vecs.copy(),
            item_vecs=self.item_vecs.copy(),
            metadata=dict(self.metadata),
        )

    """
    Flatten to one parameter vector (user rows first), and back
    """
    def flatten(self) -> NDArray[np.float64]:
        return np.concatenate([self.user_vecs.ravel(), self.item_vecs.ravel()])

    @classmethod
    def unflatten(cls, vector: NDArray[np.float64], num_users: int, num_items: int, dim: int) -> "EmbeddingTable":
        split = num_users * dim
        return cls(
            user_vecs=vector[:split].reshape(num_users, dim),
            item_vecs=vector[split:].reshape(num_items, dim),
        )

    @classmethod
    def zeros_like(cls, other: "EmbeddingTable") -> "EmbeddingTable":
        return cls(
            user_vecs=np.zeros_like(other.user_vecs),
            item_vecs=np.zeros_like(other.item_vecs),
        )


"""
Final user and item representations z_u, z_i
Gradients w.r.t. representations use the same container
"""
@dataclass(eq=False)
class Representations:

    z_user: NDArray[np.float64]
    z_item: NDArray[np.float64]

    @property
    def dim(self) -> int:
        return int(self.z_user.shape[1])

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.z_user).all() and np.isfinite(self.z_item).all())

    """
    Mean L2 norm of user and item representations
    """
    def mean_norms(self) -> tuple[float, float]:
        return (
            float(np.linalg.norm(self.z_user, axis=1).mean()) if len(self.z_user) else 0.0,
            float(np.linalg.norm(self.z_item, axis=1).mean()) if len(self.z_item) else 0.0,
        )


"""
Xavier (Glorot) uniform initialization with fan_in = fan_out = d
Entries are uniform in [-sqrt(6 / 2d), +sqrt(6 / 2d)]
Args:
    num_users: M
    num_items: N
    dim: d
    seed: Seed of the initialization stream
Returns:
    A new EmbeddingTable
"""
def init_xavier(num_users: int, num_items: int, dim: int, seed: int = 0) -> EmbeddingTable:
    if dim < 1:
        raise PreconditionError(f"dim must be >= 1, got {dim}")
    bound = float(np.sqrt(6.0 / (dim + dim)))
    rng = make_rng(seed)
    return EmbeddingTable(
        user_vecs=rng.uniform(-bound, bound, size=(num_users, dim)),
        item_vecs=rng.uniform(-bound, bound, size=(num_items, dim)),
        metadata={"init": "xavier_uniform", "seed": seed, "bound": bound},
    )


"""
Save a table as a binary checkpoint
Layout: header (magic, version, M, N, d), then user rows and item rows as
little-endian float64 in row-major order
"""
def save_embeddings(table: EmbeddingTable, path: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, FORMAT_VERSION, table.num_users, table.num_items, table.dim))
        f.write(np.ascontiguousarray(table.user_vecs, dtype=FLOAT_DTYPE).tobytes())
        f.write(np.ascontiguousarray(table.item_vecs, dtype=FLOAT_DTYPE).tobytes())
    return path


"""
Load a binary checkpoint written by save_embeddings
Raises:
    DataFormatError: Wrong magic, unsupported version or truncated body
"""
def load_embeddings(path: str) -> EmbeddingTable:
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise DataFormatError("truncated checkpoint header", path=str(path))

    magic, version, num_users, num_items, dim = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DataFormatError("not an embedding checkpoint", path=str(path))
    if version != FORMAT_VERSION:
        raise DataFormatError(f"unsupported checkpoint version {version}", path=str(path))

    expected = (num_users + num_items) * dim * FLOAT_DTYPE.itemsize
    body = data[HEADER.size:]
    if len(body) != expected:
        raise DataFormatError(
            f"checkpoint body has {len(body)} bytes, expected {expected}", path=str(path)
        )

    values = np.frombuffer(body, dtype=FLOAT_DTYPE).astype(np.float64)
    return EmbeddingTable.unflatten(values, num_users, num_items, dim)
