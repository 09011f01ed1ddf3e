import math
from types import SimpleNamespace

import numpy as np
import pytest
from pydantic import ValidationError

from src.data.splitter import split_dataset
from src.data.synthetic import generate_synthetic
from src.losses.config import LossConfig
from src.models.embedding_table import Representations
from src.models.recommender import RecommenderConfig
from src.sampling.samplers import SamplerConfig
from src.trainer.config import TrainConfig
from src.trainer.history import TrainHistory, history_hash, read_history, write_history
from src.trainer.optimizer import AdamState, adam_step
from src.trainer.trainer import Trainer, train
from src.utils.errors import DivergenceError, PreconditionError


def _config(**overrides) -> TrainConfig:
    values = {
        "dim": 8,
        "learning_rate": 0.01,
        "batch_size": 64,
        "max_epochs": 3,
        "eval_every": 1,
        "eval_k": 10,
        "loss": LossConfig(kind="SSM", similarity="cosine", temperature=0.2),
        "model": RecommenderConfig(kind="LightGCN", layers=1),
    }
    values.update(overrides)
    return TrainConfig(**values)


class TestAdam:

    def test_zero_gradient_keeps_parameters(self):
        theta = np.array([1.0, -2.0])
        state = AdamState.zeros_like([theta])
        adam_step([theta], [np.zeros(2)], state, lr=0.1)
        assert theta.tolist() == [1.0, -2.0]
        assert state.step == 1

    def test_first_step_moves_by_learning_rate(self):
        theta = np.array([1.0, 1.0])
        state = AdamState.zeros_like([theta])
        adam_step([theta], [np.array([3.0, -0.001])], state, lr=0.1)
        np.testing.assert_allclose(theta, [0.9, 1.1], atol=1e-4)

    def test_shape_mismatch(self):
        theta = np.zeros(3)
        with pytest.raises(PreconditionError):
            adam_step([theta], [np.zeros(2)], AdamState.zeros_like([theta]), lr=0.1)

    def test_non_finite_gradient(self):
        theta = np.zeros(2)
        with pytest.raises(PreconditionError):
            adam_step([theta], [np.array([np.nan, 0.0])], AdamState.zeros_like([theta]), lr=0.1)

    def test_constant_gradient_steps_by_sign(self):
        grad = np.array([3.0, -0.5, 0.01, -200.0])
        theta = np.zeros(4)
        state = AdamState.zeros_like([theta])
        for _ in range(500):
            before = theta.copy()
            adam_step([theta], [grad], state, lr=0.01)
        np.testing.assert_allclose(theta - before, -0.01 * np.sign(grad), rtol=1e-5)
        np.testing.assert_allclose(theta, -500 * 0.01 * np.sign(grad), rtol=1e-5)


class TestConfig:

    def test_l2_override(self):
        config = TrainConfig(loss=LossConfig(l2_coeff=0.01))
        assert config.effective_l2 == 0.01
        assert TrainConfig(l2_coeff=0.5).effective_l2 == 0.5

    def test_conflicting_l2(self):
        with pytest.raises(ValidationError):
            TrainConfig(l2_coeff=0.1, loss=LossConfig(l2_coeff=0.2))

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            TrainConfig(epochs=3)

    @pytest.mark.parametrize("kind", ["SSM", "CCL"])
    def test_in_batch_needs_two_positives(self, kind):
        with pytest.raises(ValidationError, match="batch_size >= 2"):
            TrainConfig(
                batch_size=1, loss=LossConfig(kind=kind), sampler=SamplerConfig(strategy="in_batch")
            )
        assert TrainConfig(batch_size=1, sampler=SamplerConfig(strategy="uniform")).batch_size == 1
        assert TrainConfig(batch_size=1, loss=LossConfig(kind="BPR")).batch_size == 1


class TestHistory:

    def _history(self) -> TrainHistory:
        return TrainHistory(
            epoch_loss=[1.5, 1.2],
            user_norm=[0.3, 0.4],
            item_norm=[0.2, 0.25],
            flagged=[0, 2],
            eval_epochs=[2],
            val_recall=[0.1],
            val_ndcg=[0.05],
            best_epoch=2,
        )

    def test_round_trip(self, tmp_path):
        history = self._history()
        loaded = read_history(write_history(history, tmp_path / "history.jsonl"))
        assert loaded == history
        assert history_hash(loaded) == history_hash(history)

    def test_hash_changes_with_content(self):
        other = self._history()
        other.epoch_loss[0] = 1.4
        assert history_hash(other) != history_hash(self._history())

    def test_records(self):
        types = [row["type"] for row in self._history().records()]
        assert types == ["epoch", "epoch", "eval", "summary"]


class TestTrainer:

    def test_same_seed_same_run(self, synthetic_split):
        table_a, history_a = train(_config(), synthetic_split)
        table_b, history_b = train(_config(), synthetic_split)
        assert history_hash(history_a) == history_hash(history_b)
        np.testing.assert_array_equal(table_a.user_vecs, table_b.user_vecs)

    def test_different_seed_differs(self, synthetic_split):
        _, history_a = train(_config(seed=0), synthetic_split)
        _, history_b = train(_config(seed=1), synthetic_split)
        assert history_hash(history_a) != history_hash(history_b)

    def test_bpr_loss_decreases(self, synthetic_split):
        config = _config(
            max_epochs=15,
            eval_every=15,
            loss=LossConfig(kind="BPR", similarity="inner_product"),
            model=RecommenderConfig(kind="MF"),
        )
        _, history = train(config, synthetic_split)
        assert history.epoch_loss[-1] < history.epoch_loss[0]

    def test_l2_shrinks_norms(self, synthetic_split):
        base = {
            "max_epochs": 5,
            "eval_every": 5,
            "loss": LossConfig(similarity="inner_product"),
            "model": RecommenderConfig(kind="MF"),
        }
        _, plain = train(_config(**base), synthetic_split)
        _, shrunk = train(_config(l2_coeff=1.0, **base), synthetic_split)
        assert shrunk.user_norm[-1] < plain.user_norm[-1]
        assert shrunk.item_norm[-1] < plain.item_norm[-1]

    def test_cosine_softmax_keeps_norms_steadier_than_bpr(self, synthetic_split):
        base = {"max_epochs": 10, "eval_every": 10, "model": RecommenderConfig(kind="MF")}
        cosine_loss = LossConfig(kind="SSM", similarity="cosine")
        bpr_loss = LossConfig(kind="BPR", similarity="inner_product")
        _, cosine = train(_config(loss=cosine_loss, **base), synthetic_split)
        _, bpr = train(_config(loss=bpr_loss, **base), synthetic_split)
        for side in ("user_norm", "item_norm"):
            cosine_drift = abs(math.log(getattr(cosine, side)[-1] / getattr(cosine, side)[0]))
            bpr_drift = abs(math.log(getattr(bpr, side)[-1] / getattr(bpr, side)[0]))
            assert cosine_drift < bpr_drift

    def test_callback_sees_every_evaluation(self, synthetic_split):
        seen = []
        train(_config(max_epochs=5, eval_every=2), synthetic_split, callback=lambda e, r: seen.append(e))
        assert seen == [2, 4, 5]

    def test_early_stopping(self, synthetic_split, monkeypatch):
        monkeypatch.setattr(
            "src.trainer.trainer.evaluate",
            lambda *args, **kwargs: SimpleNamespace(recall=0.5, ndcg=0.2),
        )
        table, history = train(_config(max_epochs=10, patience=2), synthetic_split)
        assert history.stopped_early
        assert history.eval_epochs == [1, 2, 3]
        assert history.best_epoch == 1
        assert table.metadata["best_epoch"] == 1

    def test_divergence(self, synthetic_split, monkeypatch):
        def broken(cfg, batch, reps, allow_empty=False):
            grads = Representations(z_user=np.zeros_like(reps.z_user), z_item=np.zeros_like(reps.z_item))
            return float("nan"), grads, 0

        monkeypatch.setattr("src.trainer.trainer.grad_wrt_representations", broken)
        with pytest.raises(DivergenceError):
            train(_config(), synthetic_split)

    def test_single_trailing_positive_joins_previous_batch(self, synthetic_split):
        count = synthetic_split.train.interaction_count
        trainer = Trainer(_config(batch_size=count - 1), synthetic_split)
        batches = trainer._batches(np.arange(count))
        assert [len(b) for b in batches] == [count]

    def test_uniform_sampler_keeps_tail(self, synthetic_split):
        count = synthetic_split.train.interaction_count
        config = _config(batch_size=count - 1, sampler=SamplerConfig(strategy="uniform"))
        batches = Trainer(config, synthetic_split)._batches(np.arange(count))
        assert [len(b) for b in batches] == [count - 1, 1]

    @pytest.mark.slow
    def test_end_to_end_learns(self):
        dataset = generate_synthetic(500, 300, alpha=1.2, seed=5, min_degree=10)
        split = split_dataset(dataset, seed=0)
        config = _config(dim=32, batch_size=512, max_epochs=20, eval_every=5, eval_k=20, patience=10)
        _, history = train(config, split)
        assert history.epoch_loss[-1] < history.epoch_loss[0]
        assert history.best_recall > 20 / 300
