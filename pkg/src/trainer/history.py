import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

"""
Training history and its JSON-lines persistence
One record per epoch ("epoch") and one per validation evaluation ("eval")
"""


"""
Per-epoch and per-evaluation training record
Attributes:
    epoch_loss: Mean batch loss per epoch
    user_norm, item_norm: Mean representation norms after each epoch
    flagged: Positives without negatives per epoch (in-batch collisions)
    eval_epochs: Epochs at which validation ran
    val_recall, val_ndcg: Validation metrics per evaluation
    best_epoch: Epoch of the returned checkpoint
    stopped_early: Whether patience ended the run
"""
@dataclass
class TrainHistory:

    epoch_loss: list[float] = field(default_factory=list)
    user_norm: list[float] = field(default_factory=list)
    item_norm: list[float] = field(default_factory=list)
    flagged: list[int] = field(default_factory=list)
    eval_epochs: list[int] = field(default_factory=list)
    val_recall: list[float] = field(default_factory=list)
    val_ndcg: list[float] = field(default_factory=list)
    best_epoch: Optional[int] = None
    stopped_early: bool = False

    @property
    def epochs(self) -> int:
        return len(self.epoch_loss)

    @property
    def best_recall(self) -> Optional[float]:
        return max(self.val_recall) if self.val_recall else None

    def records(self) -> list[dict]:
        rows = []
        evals = dict(zip(self.eval_epochs, zip(self.val_recall, self.val_ndcg)))
        for index, loss in enumerate(self.epoch_loss):
            epoch = index + 1
            rows.append({
                "type": "epoch",
                "epoch": epoch,
                "loss": loss,
                "user_norm": self.user_norm[index],
                "item_norm": self.item_norm[index],
                "flagged": self.flagged[index],
            })
            if epoch in evals:
                recall, ndcg = evals[epoch]
                rows.append({"type": "eval", "epoch": epoch, "recall": recall, "ndcg": ndcg})
        rows.append({"type": "summary", "best_epoch": self.best_epoch, "stopped_early": self.stopped_early})
        return rows

    def to_jsonl(self) -> str:
        return "".join(json.dumps(row, sort_keys=True) + "\n" for row in self.records())


def write_history(history: TrainHistory, path: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(history.to_jsonl(), encoding="utf-8")
    return path


"""
Rebuild a TrainHistory from its JSON-lines file
"""
def read_history(path: str) -> TrainHistory:
    history = TrainHistory()
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            row = json.loads(line)
            if row["type"] == "epoch":
                history.epoch_loss.append(row["loss"])
                history.user_norm.append(row["user_norm"])
                history.item_norm.append(row["item_norm"])
                history.flagged.append(row["flagged"])
            elif row["type"] == "eval":
                history.eval_epochs.append(row["epoch"])
                history.val_recall.append(row["recall"])
                history.val_ndcg.append(row["ndcg"])
            elif row["type"] == "summary":
                history.best_epoch = row["best_epoch"]
                history.stopped_early = row["stopped_early"]
    return history


"""
SHA-256 of the canonical JSON-lines form; equal histories hash equally
"""
def history_hash(history: TrainHistory) -> str:
    return hashlib.sha256(history.to_jsonl().encode("utf-8")).hexdigest()
