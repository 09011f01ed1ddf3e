import argparse
import json

from cli.config import settings
from cli.services.evaluation import evaluation_service
from cli.services.manifest import load_run_config

"""
evaluate command - Score a saved checkpoint with the all-ranking protocol
"""


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("evaluate", help="Evaluate a checkpoint")
    parser.add_argument("--config", required=True, help="Experiment config the checkpoint was trained with")
    parser.add_argument("--checkpoint", required=True, help="embeddings.bin written by train")
    parser.add_argument("--target", choices=["test", "validation"], default="test")
    parser.add_argument("--similarity", choices=["inner_product", "cosine"], default=None)
    parser.add_argument("--out-dir", default=None, help="Output directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    report = evaluation_service.evaluate_checkpoint(
        config,
        args.checkpoint,
        args.out_dir or settings.out_dir,
        target=args.target,
        similarity=args.similarity,
        config_path=args.config,
    )
    print(json.dumps(report.to_dict(), indent=2))
    return 0
