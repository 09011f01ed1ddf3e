import json

import hypothesis
import pytest

from src.data.dataset import InteractionDataset
from src.data.splitter import split_dataset
from src.data.synthetic import generate_synthetic
from src.data.writers import write_interactions

"""
Shared fixtures: toy datasets, a small synthetic split and experiment files on disk
"""

hypothesis.settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis.settings.load_profile("fast")


@pytest.fixture
def toy_dataset() -> InteractionDataset:
    """
    user 0: items 0 1 2 / user 1: items 1 3 / user 2: items 0 2 3 4 / user 3: item 4
    """
    users = [0, 0, 0, 1, 1, 2, 2, 2, 2, 3]
    items = [0, 1, 2, 1, 3, 0, 2, 3, 4, 4]
    return InteractionDataset.from_pairs(users, items, num_users=4, num_items=5)


@pytest.fixture(scope="session")
def synthetic_dataset() -> InteractionDataset:
    return generate_synthetic(60, 40, alpha=1.5, seed=3, min_degree=5)


@pytest.fixture(scope="session")
def synthetic_split(synthetic_dataset):
    return split_dataset(synthetic_dataset, (0.7, 0.1, 0.2), seed=11)


def small_config(data_path: str, **overrides) -> dict:
    config = {
        "dim": 8,
        "learning_rate": 0.01,
        "batch_size": 64,
        "max_epochs": 3,
        "eval_every": 1,
        "patience": 5,
        "seed": 0,
        "loss": {"kind": "SSM", "similarity": "cosine", "temperature": 0.2},
        "model": {"kind": "LightGCN", "layers": 1},
        "sampler": {"strategy": "in_batch"},
        "data": {"path": data_path, "format": "adjacency-lines", "split_seed": 1},
        "evaluation": {"k": 10, "num_groups": 4},
    }
    config.update(overrides)
    return config


"""
Interaction file plus a small experiment config, both under tmp_path
"""
@pytest.fixture
def experiment_files(tmp_path, synthetic_dataset):
    data_path = write_interactions(synthetic_dataset, tmp_path / "interactions.txt")
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(small_config(str(data_path))), encoding="utf-8")
    return data_path, config_path


@pytest.fixture
def make_config():
    return small_config
