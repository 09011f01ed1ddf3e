"""
Data module - Load, filter, split and describe interaction datasets.
"""

from src.data.dataset import InteractionDataset, DatasetSplit, DatasetStats, ItemGroups
from src.data.base_loader import BaseLoader
from src.data.loaders import PairListLoader, AdjacencyLinesLoader, LOADERS, load_interactions
from src.data.kcore import kcore_filter
from src.data.splitter import split_dataset, DEFAULT_RATIOS
from src.data.stats import compute_stats, partition_item_groups
from src.data.synthetic import generate_synthetic
from src.data.writers import save_id_maps, write_interactions

__all__ = [
    "InteractionDataset",
    "DatasetSplit",
    "DatasetStats",
    "ItemGroups",
    "BaseLoader",
    "PairListLoader",
    "AdjacencyLinesLoader",
    "LOADERS",
    "load_interactions",
    "kcore_filter",
    "split_dataset",
    "DEFAULT_RATIOS",
    "compute_stats",
    "partition_item_groups",
    "generate_synthetic",
    "save_id_maps",
    "write_interactions",
]
