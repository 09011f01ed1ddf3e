import logging
from typing import Optional

from cli.models import DataSection
from src.data.dataset import DatasetSplit, InteractionDataset, ItemGroups
from src.data.kcore import kcore_filter
from src.data.loaders import load_interactions
from src.data.splitter import split_dataset
from src.data.stats import partition_item_groups
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

"""
Data Service - Load, filter and split the interactions named by a config
Loaded datasets are cached per (path, format, kcore) and splits per split seed,
so sweeps over model settings parse the file once
"""
class DataService:

    def __init__(self):
        self._datasets: dict[tuple, InteractionDataset] = {}
        self._splits: dict[tuple, DatasetSplit] = {}

    """
    Load a dataset (k-core applied when kcore > 0)
    """
    def load(self, path: str, format: str, kcore: int = 0) -> InteractionDataset:
        key = (str(path), format, kcore)
        if key not in self._datasets:
            ds = load_interactions(path, format)
            if kcore > 0:
                ds = kcore_filter(ds, kcore)
            self._datasets[key] = ds
        return self._datasets[key]

    """
    Train / validation / test split of a config's data section
    Raises:
        ConfigError: The config has no data section
    """
    def split(self, data: Optional[DataSection]) -> DatasetSplit:
        if data is None:
            raise ConfigError("config has no data section")
        key = (data.path, data.format, data.kcore, data.split_seed, tuple(data.ratios))
        if key not in self._splits:
            ds = self.load(data.path, data.format, data.kcore)
            self._splits[key] = split_dataset(ds, data.ratios, seed=data.split_seed)
        return self._splits[key]

    """
    Popularity groups of a split's training part, capped by the catalog size
    """
    def groups(self, split: DatasetSplit, num_groups: int) -> ItemGroups:
        return partition_item_groups(split.train, num_groups=min(num_groups, split.num_items))


data_service = DataService()
