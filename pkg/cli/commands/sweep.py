import argparse

from cli.config import settings
from cli.services.manifest import load_run_config
from cli.services.sweep import PRESETS, sweep_service

"""
sweep command - One training run per grid point, results in sweep.csv
"""


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sweep", help="Sweep hyperparameters over a grid")
    parser.add_argument("--config", required=True, help="Base experiment config")
    parser.add_argument(
        "--grid",
        required=True,
        help=f"Preset ({', '.join(sorted(PRESETS))}) or a JSON file of dotted paths to value lists",
    )
    parser.add_argument("--parallel", type=int, default=1, help="Worker processes (capped by SSMREC_THREADS)")
    parser.add_argument("--out-dir", default=None, help="Output directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    rows = sweep_service.run(
        config,
        args.grid,
        args.out_dir or settings.out_dir,
        parallel=args.parallel,
        config_path=args.config,
    )
    for row in rows:
        print(f"{row.label:<40} recall={row.recall:.4f} ndcg={row.ndcg:.4f}")
    return 0
