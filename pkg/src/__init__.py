"""
ssm-rec - Sampled softmax collaborative filtering

Interaction datasets, MF / SVD++ / LightGCN recommenders, five training losses,
negative samplers, an Adam trainer, all-ranking evaluation and numerical checks
of the analytical properties of the sampled softmax loss.
"""

from src.data import InteractionDataset, DatasetSplit, load_interactions, split_dataset, generate_synthetic
from src.models import EmbeddingTable, Representations, RecommenderConfig, build_recommender
from src.losses import LossConfig, Batch, grad_wrt_representations
from src.sampling import SamplerConfig, build_sampler
from src.evaluation import EvalReport, evaluate
from src.trainer import TrainConfig, Trainer, train
from src.theory import run_suite

__version__ = "0.1.0"

__all__ = [
    "InteractionDataset",
    "DatasetSplit",
    "load_interactions",
    "split_dataset",
    "generate_synthetic",
    "EmbeddingTable",
    "Representations",
    "RecommenderConfig",
    "build_recommender",
    "LossConfig",
    "Batch",
    "grad_wrt_representations",
    "SamplerConfig",
    "build_sampler",
    "EvalReport",
    "evaluate",
    "TrainConfig",
    "Trainer",
    "train",
    "run_suite",
]
