import logging
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from src.data.dataset import DatasetSplit
from src.data.stats import partition_item_groups
from src.evaluation.evaluator import EvalReport, evaluate
from src.losses.objective import grad_wrt_representations
from src.models.embedding_table import EmbeddingTable, init_xavier
from src.models.recommender import build_recommender
from src.sampling.samplers import InBatchSampler, build_sampler
from src.trainer.config import TrainConfig
from src.trainer.history import TrainHistory
from src.trainer.optimizer import AdamState, adam_step
from src.utils.errors import DivergenceError, PreconditionError
from src.utils.rng import make_rng, spawn_rngs

logger = logging.getLogger(__name__)

"""
Trainer - Mini-batch training with validation-based early stopping
Each step: forward through the recommender, loss gradient w.r.t. the
representations, backward to the layer-0 tables, L2 term, Adam update
"""

EvalCallback = Callable[[int, EvalReport], None]


"""
One training run over a dataset split
Args:
    config: Training configuration
    split: Train / validation / test parts (only train and validation are used)
    verbose: Show a progress bar
    callback: Called with (epoch, validation report) after every evaluation
Example:
    >>> trainer = Trainer(TrainConfig(dim=16, max_epochs=20), split)
    >>> table, history = trainer.train()
"""
class Trainer:

    def __init__(
        self,
        config: TrainConfig,
        split: DatasetSplit,
        verbose: bool = False,
        callback: Optional[EvalCallback] = None
    ):
        self.config = config
        self.split = split
        self.verbose = verbose
        self.callback = callback

        if split.train.interaction_count == 0:
            raise PreconditionError("training split is empty")

        shuffle_rng, sampler_rng = spawn_rngs(config.seed, 2)
        self.shuffle_rng = shuffle_rng
        self.sampler_rng = sampler_rng if config.sampler.seed is None else make_rng(config.sampler.seed)

        self.recommender = build_recommender(config.model, split.train)
        self.sampler = build_sampler(config.sampler, config.loss, split.train)
        self.groups = partition_item_groups(split.train, num_groups=1)
        self.users, self.items = split.train.pairs()

    """
    Index ranges of the shuffled interactions, one per batch
    In-batch negatives need at least two positives, so a trailing single
    positive joins the previous batch
    """
    def _batches(self, order: np.ndarray) -> list[np.ndarray]:
        size = self.config.batch_size
        batches = [order[start:start + size] for start in range(0, len(order), size)]
        if (
            isinstance(self.sampler, InBatchSampler)
            and len(batches) > 1
            and len(batches[-1]) < 2
        ):
            tail = batches.pop()
            batches[-1] = np.concatenate([batches[-1], tail])
        return batches

    def _run_epoch(self, table: EmbeddingTable, state: AdamState, epoch: int) -> tuple[float, int]:
        config = self.config
        l2 = config.effective_l2
        order = self.shuffle_rng.permutation(len(self.users))
        losses = []
        flagged = 0

        for index, batch_ids in enumerate(self._batches(order)):
            reps = self.recommender.forward(table)
            batch = self.sampler.sample(self.users[batch_ids], self.items[batch_ids], self.sampler_rng)
            loss, grad_reps, batch_flagged = grad_wrt_representations(
                config.loss, batch, reps, allow_empty=self.sampler.allow_empty
            )
            if not np.isfinite(loss):
                raise DivergenceError("non-finite loss", epoch=epoch, batch=index)
            if not grad_reps.is_finite():
                raise DivergenceError("non-finite gradient", epoch=epoch, batch=index)

            grads = self.recommender.backward(grad_reps)
            if l2 > 0:
                grads.user_vecs += l2 * table.user_vecs
                grads.item_vecs += l2 * table.item_vecs
            adam_step([table.user_vecs, table.item_vecs], [grads.user_vecs, grads.item_vecs], state, config.learning_rate)

            if not table.is_finite():
                raise DivergenceError("non-finite parameters after update", epoch=epoch, batch=index)
            losses.append(loss)
            flagged += batch_flagged

        return float(np.mean(losses)), flagged

    """
    Train until max_epochs or early stopping
    Returns:
        (best checkpoint by validation Recall@K, history)
    Raises:
        DivergenceError: Non-finite loss, gradient or parameters
    """
    def train(self) -> tuple[EmbeddingTable, TrainHistory]:
        config = self.config
        split = self.split
        table = init_xavier(split.num_users, split.num_items, config.dim, seed=config.seed)
        state = AdamState.zeros_like([table.user_vecs, table.item_vecs])
        history = TrainHistory()

        best_table = table.copy()
        best_recall = -np.inf
        stale = 0

        logger.info(
            "training %s + %s (%s) on %r",
            config.model.kind, config.loss.kind, config.loss.similarity, split.train,
        )
        progress = tqdm(range(1, config.max_epochs + 1), desc="training", disable=not self.verbose)
        for epoch in progress:
            loss, flagged = self._run_epoch(table, state, epoch)
            reps = self.recommender.forward(table)
            user_norm, item_norm = reps.mean_norms()
            history.epoch_loss.append(loss)
            history.user_norm.append(user_norm)
            history.item_norm.append(item_norm)
            history.flagged.append(flagged)
            progress.set_postfix(loss=f"{loss:.4f}")
            logger.debug("epoch %d loss=%.6f |z_u|=%.4f |z_i|=%.4f", epoch, loss, user_norm, item_norm)

            if epoch % config.eval_every != 0 and epoch != config.max_epochs:
                continue

            report = evaluate(
                reps,
                split,
                self.groups,
                k=config.eval_k,
                similarity=config.eval_similarity,
                target="validation",
            )
            history.eval_epochs.append(epoch)
            history.val_recall.append(report.recall)
            history.val_ndcg.append(report.ndcg)
            if self.callback is not None:
                self.callback(epoch, report)

            if report.recall > best_recall:
                best_recall = report.recall
                best_table = table.copy()
                history.best_epoch = epoch
                stale = 0
            else:
                stale += 1
                if stale >= config.patience:
                    logger.info("early stopping at epoch %d (best epoch %d)", epoch, history.best_epoch)
                    history.stopped_early = True
                    break

        progress.close()
        best_table.metadata.update({"best_epoch": history.best_epoch, "seed": config.seed})
        logger.info("best validation recall@%d=%.4f at epoch %s", config.eval_k, best_recall, history.best_epoch)
        return best_table, history


def train(
    config: TrainConfig,
    split: DatasetSplit,
    verbose: bool = False,
    callback: Optional[EvalCallback] = None
) -> tuple[EmbeddingTable, TrainHistory]:
    return Trainer(config, split, verbose=verbose, callback=callback).train()
