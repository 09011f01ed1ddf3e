import logging
from abc import ABC, abstractmethod
from typing import Literal, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from src.data.dataset import InteractionDataset
from src.losses.batch import Batch
from src.losses.config import LossConfig
from src.sampling.negatives import in_batch_negative_matrix, sample_uniform_many

logger = logging.getLogger(__name__)

"""
Negative samplers - Turn a mini-batch of positives into a Batch with negatives
UniformSampler - n uniform negatives per positive (BPR: 1, BCE: ratio, ablations: n)
InBatchSampler - Positives of the other anchors
CatalogSampler - No sampled negatives; the full softmax scores the catalog
"""


"""
Sampler section of an experiment config
Attributes:
    strategy: uniform or in_batch
    negatives_per_positive: n for uniform sampling of SSM/CCL
    bce_ratio: Negatives per positive for BCE (1:4 by default)
    seed: Seed of the sampling stream (defaults to the training seed)
"""
class SamplerConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    strategy: Literal["uniform", "in_batch"] = "in_batch"
    negatives_per_positive: int = Field(default=1, ge=1)
    bce_ratio: int = Field(default=4, ge=1)
    seed: Optional[int] = None


class NegativeSampler(ABC):

    """
    Positives without negatives are legal for this sampler
    """
    allow_empty: bool = False

    def __init__(self, train: InteractionDataset):
        self.train = train

    @abstractmethod
    def sample(
        self,
        users: NDArray[np.int64],
        pos_items: NDArray[np.int64],
        rng: np.random.Generator
    ) -> Batch:
        pass


class UniformSampler(NegativeSampler):

    def __init__(self, train: InteractionDataset, count: int):
        super().__init__(train)
        self.count = count

    def sample(self, users, pos_items, rng) -> Batch:
        neg_items = sample_uniform_many(users, self.count, self.train, rng)
        return Batch(users=users, pos_items=pos_items, neg_items=neg_items)


class InBatchSampler(NegativeSampler):

    allow_empty = True

    def sample(self, users, pos_items, rng) -> Batch:
        neg_items, neg_mask = in_batch_negative_matrix(pos_items)
        return Batch(
            users=users, pos_items=pos_items, neg_items=neg_items, neg_mask=neg_mask, shared=True
        )


class CatalogSampler(NegativeSampler):

    def sample(self, users, pos_items, rng) -> Batch:
        empty = np.zeros((len(users), 0), dtype=np.int64)
        return Batch(users=users, pos_items=pos_items, neg_items=empty)


"""
Choose the sampler a loss needs
BPR always takes one uniform negative and BCE takes bce_ratio uniform negatives;
SSM and CCL follow the configured strategy; SM needs none
Args:
    config: Sampler configuration
    loss: Loss configuration
    train: Training interactions
Returns:
    A NegativeSampler
"""
def build_sampler(config: SamplerConfig, loss: LossConfig, train: InteractionDataset) -> NegativeSampler:
    if loss.kind in ("BPR", "BCE"):
        if config.strategy == "in_batch":
            logger.info("%s uses uniform negatives, ignoring strategy=in_batch", loss.kind)
        return UniformSampler(train, 1 if loss.kind == "BPR" else config.bce_ratio)
    if loss.kind == "SM":
        return CatalogSampler(train)
    if config.strategy == "in_batch":
        return InBatchSampler(train)
    return UniformSampler(train, config.negatives_per_positive)
