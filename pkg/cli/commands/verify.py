import argparse
import json
import sys

from cli.config import settings
from cli.services.verification import verification_service
from src.theory.suite import SUITE_NAMES

"""
verify command - Run the analytical checks, exit 3 when any fails
"""

VERIFICATION_FAILED = 3


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="Run the verification suite")
    parser.add_argument("--suite", choices=SUITE_NAMES, default="all")
    parser.add_argument("--trials", type=int, default=None, help="Randomized trials per check")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", dest="json_path", default=None, help="Write the report here")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    trials = args.trials if args.trials is not None else settings.verify_trials
    report = verification_service.run(args.suite, trials, seed=args.seed, json_path=args.json_path)
    for check in report.checks:
        print(f"{check['status']:<5} {check['name']}  max_error={check['max_error']:.3g}")
    if not report.passed:
        print(json.dumps([c for c in report.checks if c["status"] != "pass"], indent=2), file=sys.stderr)
        return VERIFICATION_FAILED
    return 0
