import logging
from pathlib import Path
from typing import Optional

import numpy as np

from cli.config import settings
from cli.models import RunConfig, RunManifest, SeedResult, TrainSummary
from cli.services.data import data_service
from cli.services.manifest import file_sha256, write_json, write_manifest
from src.data.dataset import DatasetSplit
from src.evaluation.evaluator import EvalReport, evaluate
from src.models.embedding_table import EmbeddingTable, save_embeddings
from src.models.recommender import build_recommender
from src.trainer.history import TrainHistory, history_hash, write_history
from src.trainer.trainer import train

logger = logging.getLogger(__name__)

"""
Training Service - Train one config over one or more seeds
Handles:
    - Data loading and splitting
    - One training run per seed
    - Test evaluation of each best checkpoint
    - Checkpoint, history, report and manifest files
"""
class TrainingService:

    """
    Test-time evaluation of a trained table
    """
    def evaluate_table(
        self,
        config: RunConfig,
        split: DatasetSplit,
        table: EmbeddingTable,
        target: str = "test",
        similarity: Optional[str] = None
    ) -> EvalReport:
        reps = build_recommender(config.model, split.train).forward(table)
        groups = data_service.groups(split, config.evaluation.num_groups)
        return evaluate(
            reps,
            split,
            groups,
            k=config.evaluation.k,
            similarity=similarity or config.evaluation.similarity,
            target=target,
            chunk_size=settings.eval_chunk_size,
        )

    """
    Train one seed and persist its artifacts under out_dir
    Returns:
        (seed result, test report, history)
    """
    def train_seed(
        self,
        config: RunConfig,
        seed: int,
        out_dir: Path,
        verbose: bool = False
    ) -> tuple[SeedResult, EvalReport, TrainHistory]:
        split = data_service.split(config.data)
        seeded = config.model_copy(update={"seed": seed})
        table, history = train(seeded.train_config(), split, verbose=verbose)
        report = self.evaluate_table(seeded, split, table)

        seed_dir = out_dir / f"seed_{seed}"
        checkpoint = save_embeddings(table, seed_dir / "embeddings.bin")
        write_history(history, seed_dir / "history.jsonl")
        write_json(report.to_dict(), seed_dir / "report.json")

        result = SeedResult(
            seed=seed,
            recall=report.recall,
            ndcg=report.ndcg,
            best_epoch=history.best_epoch,
            epochs=history.epochs,
            history_hash=history_hash(history),
            checkpoint=str(checkpoint),
        )
        return result, report, history

    """
    Train every seed, aggregate mean and standard deviation, write the manifest
    Args:
        config: Validated experiment config
        seeds: Seeds to run (the config's seed when empty)
        out_dir: Output directory
        config_path: Source file of the config, hashed into the manifest
    Returns:
        (summary, manifest path)
    """
    def train(
        self,
        config: RunConfig,
        seeds: list[int],
        out_dir: Path,
        config_path: Optional[str] = None,
        verbose: bool = False
    ) -> tuple[TrainSummary, Path]:
        seeds = seeds or [config.seed]
        out_dir = Path(out_dir)
        results = []
        outputs = []

        for seed in seeds:
            logger.info("training seed %d", seed)
            result, _, _ = self.train_seed(config, seed, out_dir, verbose=verbose)
            results.append(result)
            seed_dir = out_dir / f"seed_{seed}"
            outputs.extend(str(seed_dir / name) for name in ("embeddings.bin", "history.jsonl", "report.json"))

        recalls = np.array([r.recall for r in results])
        ndcgs = np.array([r.ndcg for r in results])
        summary = TrainSummary(
            k=config.evaluation.k,
            runs=results,
            recall_mean=float(recalls.mean()),
            recall_std=float(recalls.std()),
            ndcg_mean=float(ndcgs.mean()),
            ndcg_std=float(ndcgs.std()),
        )
        summary_path = write_json(summary.model_dump(mode="json"), out_dir / "summary.json")
        outputs.append(str(summary_path))

        inputs = {config.data.path: file_sha256(config.data.path)}
        if config_path is not None:
            inputs[str(config_path)] = file_sha256(config_path)
        manifest = RunManifest(
            command="train",
            config=config.model_dump(mode="json"),
            seeds=seeds,
            inputs=inputs,
            outputs=outputs,
            history_hashes={str(r.seed): r.history_hash for r in results},
        )
        return summary, write_manifest(manifest, out_dir)


training_service = TrainingService()
