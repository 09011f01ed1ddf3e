import argparse
import json
from pathlib import Path

from cli.models import RunManifest
from cli.services.data import data_service
from cli.services.manifest import file_sha256, write_json, write_manifest
from src.data.stats import compute_stats

"""
stats command - Dataset statistics (users, items, interactions, density)
"""


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("stats", help="Print dataset statistics")
    parser.add_argument("--input", required=True, help="Interaction file")
    parser.add_argument("--format", default="adjacency-lines", help="adjacency-lines | pair-list")
    parser.add_argument("--kcore", type=int, default=0, help="Apply a k-core filter first")
    parser.add_argument("--json", dest="json_path", default=None, help="Also write the statistics here")
    parser.set_defaults(handler=run)


"""
Load the file, print the statistics as JSON
Returns:
    Exit code 0
"""
def run(args: argparse.Namespace) -> int:
    ds = data_service.load(args.input, args.format, args.kcore)
    stats = compute_stats(ds).to_dict()
    print(json.dumps(stats, indent=2))

    if args.json_path:
        path = write_json(stats, Path(args.json_path))
        write_manifest(
            RunManifest(
                command="stats",
                config={"format": args.format, "kcore": args.kcore},
                inputs={args.input: file_sha256(args.input)},
                outputs=[str(path)],
            ),
            path.parent,
        )
    return 0
