from datetime import datetime, timezone
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.data.splitter import DEFAULT_RATIOS
from src.trainer.config import TrainConfig

"""
Pydantic models for experiment documents, reports and manifests
"""

"""
Where the interactions come from and how they are split
"""
class DataSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str
    format: Literal["adjacency-lines", "adjacency", "pair-list", "pair"] = "adjacency-lines"
    kcore: int = Field(default=0, ge=0)  # 0 disables the filter
    split_seed: int = 0
    ratios: tuple[float, float, float] = DEFAULT_RATIOS

"""
Test-time evaluation settings
"""
class EvaluationSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int = Field(default=20, ge=1)
    similarity: Literal["inner_product", "cosine"] = "inner_product"
    num_groups: int = Field(default=10, ge=1)

"""
One experiment document: TrainConfig fields at the top level plus data and evaluation
dim is required here even though TrainConfig defaults it
"""
class RunConfig(TrainConfig):
    dim: int = Field(ge=1)
    data: Optional[DataSection] = None
    evaluation: EvaluationSection = Field(default_factory=EvaluationSection)

    def train_config(self) -> TrainConfig:
        return TrainConfig.model_validate(self.model_dump(exclude={"data", "evaluation"}))

"""
Provenance of one command invocation
"""
class RunManifest(BaseModel):
    command: str
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    config: Optional[dict[str, Any]] = None
    seeds: list[int] = []
    inputs: dict[str, str] = {}          # path -> sha256
    outputs: list[str] = []
    history_hashes: dict[str, str] = {}  # seed -> sha256 of the history

"""
Result of one seed of a training run
"""
class SeedResult(BaseModel):
    seed: int
    recall: float
    ndcg: float
    best_epoch: Optional[int] = None
    epochs: int
    history_hash: str
    checkpoint: str

"""
Aggregate over the seeds of a training run
"""
class TrainSummary(BaseModel):
    k: int
    runs: list[SeedResult]
    recall_mean: float
    recall_std: float
    ndcg_mean: float
    ndcg_std: float

"""
Result of a verification suite
"""
class VerifyReport(BaseModel):
    suite: str
    passed: bool
    checks: list[dict[str, Any]]

"""
One row of a sweep matrix
"""
class SweepRow(BaseModel):
    label: str
    params: dict[str, Any]
    recall: float
    ndcg: float
