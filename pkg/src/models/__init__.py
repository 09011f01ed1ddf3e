"""
Models module - Embedding tables, propagation and recommenders.
"""

from src.models.embedding_table import (
    EmbeddingTable,
    Representations,
    init_xavier,
    save_embeddings,
    load_embeddings,
)
from src.models.propagation import PropagationOperator, propagate
from src.models.recommender import (
    RecommenderConfig,
    BaseRecommender,
    MFRecommender,
    SVDppUserRecommender,
    SVDppItemRecommender,
    LightGCNRecommender,
    RECOMMENDERS,
    build_recommender,
    forward,
    backward,
    representation_norms,
)

__all__ = [
    "EmbeddingTable",
    "Representations",
    "init_xavier",
    "save_embeddings",
    "load_embeddings",
    "PropagationOperator",
    "propagate",
    "RecommenderConfig",
    "BaseRecommender",
    "MFRecommender",
    "SVDppUserRecommender",
    "SVDppItemRecommender",
    "LightGCNRecommender",
    "RECOMMENDERS",
    "build_recommender",
    "forward",
    "backward",
    "representation_norms",
]
