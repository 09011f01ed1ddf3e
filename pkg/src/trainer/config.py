from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.losses.config import LossConfig
from src.models.recommender import RecommenderConfig
from src.sampling.samplers import SamplerConfig

"""
Training configuration
Field names mirror the JSON experiment documents one to one
"""


"""
Hyperparameters of one training run
Attributes:
    dim: Embedding size d
    learning_rate: Adam step size
    batch_size: Positives per mini-batch
    max_epochs: Hard epoch limit
    eval_every: Epochs between validation evaluations
    patience: Non-improving evaluations before early stopping
    l2_coeff: lambda, added as lambda * theta to the layer-0 table gradients
    seed: Seed of initialization, shuffling and sampling
    eval_k: K of the validation Recall@K that selects the checkpoint
    eval_similarity: Similarity used to rank items at validation time
    loss, model, sampler: Nested sections
"""
class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(default=64, ge=1)
    learning_rate: float = Field(default=0.001, gt=0.0)
    batch_size: int = Field(default=2048, ge=1)
    max_epochs: int = Field(default=200, ge=1)
    eval_every: int = Field(default=5, ge=1)
    patience: int = Field(default=10, ge=1)
    l2_coeff: float = Field(default=0.0, ge=0.0)
    seed: int = 0
    eval_k: int = Field(default=20, ge=1)
    eval_similarity: Literal["inner_product", "cosine"] = "inner_product"
    loss: LossConfig = Field(default_factory=LossConfig)
    model: RecommenderConfig = Field(default_factory=RecommenderConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)

    @model_validator(mode="after")
    def _check_l2(self) -> "TrainConfig":
        override = self.loss.l2_coeff
        if override is not None and self.l2_coeff not in (0.0, override):
            raise ValueError(
                f"l2_coeff ({self.l2_coeff}) and loss.l2_coeff ({override}) disagree"
            )
        return self

    @model_validator(mode="after")
    def _check_in_batch_size(self) -> "TrainConfig":
        in_batch = self.sampler.strategy == "in_batch" and self.loss.kind in ("SSM", "CCL")
        if in_batch and self.batch_size < 2:
            raise ValueError("in-batch negatives need batch_size >= 2")
        return self

    """
    The L2 coefficient in effect (loss.l2_coeff wins when set)
    """
    @property
    def effective_l2(self) -> float:
        return self.loss.l2_coeff if self.loss.l2_coeff is not None else self.l2_coeff
