import numpy as np
import pytest
from scipy import stats

from src.data.dataset import InteractionDataset
from src.losses.config import LossConfig
from src.sampling.negatives import (
    in_batch_negative_matrix,
    in_batch_negatives,
    inclusion_frequencies,
    sample_uniform,
    sample_uniform_many,
)
from src.sampling.samplers import CatalogSampler, InBatchSampler, SamplerConfig, UniformSampler, build_sampler
from src.utils.errors import PreconditionError
from src.utils.rng import make_rng


class TestUniform:

    def test_only_one_candidate(self):
        ds = InteractionDataset.from_pairs([0], [0], num_items=2)
        draws = sample_uniform(0, 50, ds, make_rng(0))
        assert draws.tolist() == [1] * 50

    def test_complement_is_uniform(self, toy_dataset):
        draws = sample_uniform(1, 30_000, toy_dataset, make_rng(1))
        counts = np.bincount(draws, minlength=5)
        assert counts[1] == 0 and counts[3] == 0
        _, p_value = stats.chisquare(counts[[0, 2, 4]])
        assert p_value > 1e-4

    def test_same_seed_same_draws(self, toy_dataset):
        a = sample_uniform(0, 20, toy_dataset, make_rng(5))
        b = sample_uniform(0, 20, toy_dataset, make_rng(5))
        assert a.tolist() == b.tolist()

    def test_zero_draws(self, toy_dataset):
        assert sample_uniform(0, 0, toy_dataset, make_rng(0)).size == 0

    def test_user_with_every_item(self):
        ds = InteractionDataset.from_pairs([0, 0], [0, 1])
        with pytest.raises(PreconditionError):
            sample_uniform(0, 1, ds, make_rng(0))
        with pytest.raises(PreconditionError):
            sample_uniform_many(np.array([0]), 1, ds, make_rng(0))

    def test_many_users_avoid_their_positives(self, synthetic_split):
        train = synthetic_split.train
        users = np.arange(train.num_users)
        draws = sample_uniform_many(users, 25, train, make_rng(2))
        assert draws.shape == (train.num_users, 25)
        assert draws.min() >= 0 and draws.max() < train.num_items
        for user in users.tolist():
            assert not np.isin(draws[user], train.items_of(user)).any()


class TestInBatch:

    def test_other_positives(self):
        assert in_batch_negatives([(0, 10), (1, 11), (2, 12)]) == [[11, 12], [10, 12], [10, 11]]

    def test_shared_item_is_dropped(self):
        negatives = in_batch_negatives([(0, 5), (1, 5), (2, 6)])
        assert negatives == [[6], [6], [5, 5]]

    def test_full_collision_leaves_empty_lists(self):
        neg_items, neg_mask = in_batch_negative_matrix(np.array([3, 3]))
        assert neg_items.shape == (2, 1)
        assert not neg_mask.any()

    def test_batch_of_one(self):
        with pytest.raises(PreconditionError):
            in_batch_negative_matrix(np.array([4]))

    def test_inclusion_frequencies_sum_to_one(self, synthetic_split):
        train = synthetic_split.train
        freq = inclusion_frequencies(train, 32, 50, make_rng(3))
        assert freq.shape == (train.num_items,)
        assert freq.sum() == pytest.approx(1.0)

    @pytest.mark.slow
    def test_inclusion_is_proportional_to_popularity(self):
        degrees = 100 + 2 * np.arange(150)
        users = np.concatenate([np.arange(d) for d in degrees])
        items = np.repeat(np.arange(len(degrees)), degrees)
        train = InteractionDataset.from_pairs(users, items)

        freq = inclusion_frequencies(train, 512, 10_000, make_rng(3))
        ratio = freq / (degrees / degrees.sum())
        assert np.abs(ratio - 1.0).max() < 0.05

    def test_inclusion_batch_too_large(self, toy_dataset):
        with pytest.raises(PreconditionError):
            inclusion_frequencies(toy_dataset, 11, 1, make_rng(0))


class TestBuildSampler:

    @pytest.mark.parametrize("kind, count", [("BPR", 1), ("BCE", 4)])
    def test_pairwise_and_pointwise_use_uniform(self, toy_dataset, kind, count):
        sampler = build_sampler(SamplerConfig(strategy="in_batch"), LossConfig(kind=kind), toy_dataset)
        assert isinstance(sampler, UniformSampler)
        assert sampler.count == count

    def test_softmax_needs_no_negatives(self, toy_dataset):
        sampler = build_sampler(SamplerConfig(), LossConfig(kind="SM"), toy_dataset)
        assert isinstance(sampler, CatalogSampler)
        batch = sampler.sample(np.array([0, 1]), np.array([0, 1]), make_rng(0))
        assert batch.neg_items.shape == (2, 0)

    def test_sampled_softmax_strategies(self, toy_dataset):
        in_batch = build_sampler(SamplerConfig(strategy="in_batch"), LossConfig(), toy_dataset)
        assert isinstance(in_batch, InBatchSampler) and in_batch.allow_empty
        uniform = build_sampler(
            SamplerConfig(strategy="uniform", negatives_per_positive=3), LossConfig(), toy_dataset
        )
        batch = uniform.sample(np.array([0, 2]), np.array([1, 4]), make_rng(0))
        assert batch.negative_counts.tolist() == [3, 3]
        assert not uniform.allow_empty

    def test_in_batch_sample(self, toy_dataset):
        sampler = build_sampler(SamplerConfig(), LossConfig(kind="CCL"), toy_dataset)
        batch = sampler.sample(np.array([0, 1, 2]), np.array([1, 1, 4]), make_rng(0))
        assert batch.negative_lists() == [[4], [4], [1, 1]]
        assert batch.shared
        assert batch.neg_items.shape == (3, 2)
