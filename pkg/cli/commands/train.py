import argparse
import json

from cli.config import settings
from cli.services.manifest import load_run_config
from cli.services.training import training_service
from src.utils.errors import ConfigError

"""
train command - Train a config over one or more seeds
"""


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("train", help="Train a model from a JSON config")
    parser.add_argument("--config", required=True, help="Experiment config (JSON)")
    parser.add_argument("--seeds", default=None, help="Comma separated seeds, e.g. 1,2,3")
    parser.add_argument("--out-dir", default=None, help="Output directory")
    parser.add_argument("--verbose", action="store_true", help="Show a progress bar")
    parser.set_defaults(handler=run)


"""
Parse "1,2,3" into [1, 2, 3]
Raises:
    ConfigError: Non-integer or duplicate seeds
"""
def parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"--seeds must be comma separated integers, got {text!r}") from e
    if len(set(seeds)) != len(seeds):
        raise ConfigError(f"--seeds has duplicates: {text!r}")
    return seeds


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    seeds = parse_seeds(args.seeds) if args.seeds else []
    summary, manifest = training_service.train(
        config,
        seeds,
        args.out_dir or settings.out_dir,
        config_path=args.config,
        verbose=args.verbose,
    )
    print(json.dumps(summary.model_dump(mode="json"), indent=2))
    print(f"manifest: {manifest}")
    return 0
