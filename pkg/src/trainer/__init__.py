"""
Trainer module - Adam, training configuration, history and the training loop.
"""

from src.trainer.optimizer import AdamState, adam_step, BETA1, BETA2, EPSILON
from src.trainer.config import TrainConfig
from src.trainer.history import TrainHistory, write_history, read_history, history_hash
from src.trainer.trainer import Trainer, train

__all__ = [
    "AdamState",
    "adam_step",
    "BETA1",
    "BETA2",
    "EPSILON",
    "TrainConfig",
    "TrainHistory",
    "write_history",
    "read_history",
    "history_hash",
    "Trainer",
    "train",
]
