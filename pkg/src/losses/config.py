from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

"""
Loss section of an experiment config
"""

LossKind = Literal["BCE", "BPR", "SM", "CCL", "SSM"]
SimilarityKind = Literal["inner_product", "cosine"]
DEFAULT_TEMPERATURE = 0.2


"""
Loss configuration
Attributes:
    kind: BCE, BPR, SM, CCL or SSM
    similarity: inner_product or cosine
    temperature: tau; cosine scores are divided by it (CCL excepted)
    ccl_margin: m in [0, 1], CCL only
    ccl_weight: w >= 0, CCL only
    l2_coeff: Optional override of the trainer's L2 coefficient
Example:
    >>> LossConfig(kind="SSM", similarity="cosine", temperature=0.1)
"""
class LossConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: LossKind = "SSM"
    similarity: SimilarityKind = "cosine"
    temperature: float = Field(default=DEFAULT_TEMPERATURE, gt=0.0)
    ccl_margin: float = Field(default=0.5, ge=0.0, le=1.0)
    ccl_weight: float = Field(default=1.0, ge=0.0)
    l2_coeff: Optional[float] = Field(default=None, ge=0.0)

    """
    Factor applied to raw similarities
    Cosine scores are divided by tau, except for CCL whose margin lives on the raw cosine scale
    """
    @property
    def score_scale(self) -> float:
        if self.similarity == "cosine" and self.kind != "CCL":
            return 1.0 / self.temperature
        return 1.0
