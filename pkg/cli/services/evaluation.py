import csv
import logging
from pathlib import Path
from typing import Optional

from cli.models import RunConfig, RunManifest
from cli.services.data import data_service
from cli.services.manifest import file_sha256, write_json, write_manifest
from cli.services.training import training_service
from src.evaluation.evaluator import CSV_FIELDS, EvalReport
from src.models.embedding_table import load_embeddings
from src.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

"""
Evaluation Service - Score a saved checkpoint against a config's split
"""
class EvaluationService:

    """
    Evaluate a checkpoint and write report.json, report.csv and a manifest
    Args:
        config: Experiment config (data section and model must match the checkpoint)
        checkpoint: Path of a binary embedding checkpoint
        out_dir: Output directory
        target: "test" or "validation"
        similarity: Optional override of the inference similarity
        config_path: Source file of the config, hashed into the manifest
    Returns:
        The EvalReport
    Raises:
        PreconditionError: Checkpoint shape does not match the dataset
    """
    def evaluate_checkpoint(
        self,
        config: RunConfig,
        checkpoint: str,
        out_dir: Path,
        target: str = "test",
        similarity: Optional[str] = None,
        config_path: Optional[str] = None
    ) -> EvalReport:
        split = data_service.split(config.data)
        table = load_embeddings(checkpoint)
        if table.num_users != split.num_users or table.num_items != split.num_items:
            raise PreconditionError(
                f"checkpoint is {table.num_users}x{table.num_items}, "
                f"dataset is {split.num_users}x{split.num_items}"
            )
        if table.dim != config.dim:
            logger.warning("checkpoint dim %d differs from config dim %d", table.dim, config.dim)

        report = training_service.evaluate_table(config, split, table, target=target, similarity=similarity)

        out_dir = Path(out_dir)
        json_path = write_json(report.to_dict(), out_dir / "report.json")
        csv_path = out_dir / "report.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_FIELDS)
            writer.writerow(report.to_csv_row())

        inputs = {checkpoint: file_sha256(checkpoint), config.data.path: file_sha256(config.data.path)}
        if config_path is not None:
            inputs[str(config_path)] = file_sha256(config_path)
        write_manifest(
            RunManifest(
                command="evaluate",
                config=config.model_dump(mode="json"),
                seeds=[config.seed],
                inputs=inputs,
                outputs=[str(json_path), str(csv_path)],
            ),
            out_dir,
        )
        return report


evaluation_service = EvaluationService()
