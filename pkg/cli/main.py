import argparse
import logging
import sys
from typing import Optional

from pydantic import ValidationError

from cli.commands import COMMANDS
from cli.config import settings
from src.utils.errors import ConfigError, DataFormatError, PreconditionError, ToolkitError
from src.utils.logging import configure_logging

logger = logging.getLogger(__name__)

"""
ssmrec - Main entry point
Sampled-softmax collaborative filtering toolkit: dataset statistics, training,
evaluation, verification of the analytical properties and hyperparameter sweeps

Exit codes:
    0 success
    1 validation error (bad config, malformed data, violated precondition)
    2 runtime failure (divergence, I/O)
    3 verification failure
"""

VALIDATION_ERROR = 1
RUNTIME_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Sampled-softmax collaborative filtering toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    parser.add_argument("--log-level", default=settings.log_level, help="DEBUG, INFO, WARNING, ...")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


"""
Format a pydantic error so every offending field path is named
"""
def _describe_validation_error(error: ValidationError) -> str:
    lines = [f"invalid config ({error.error_count()} error(s)):"]
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"  {location}: {item['msg']}")
    return "\n".join(lines)


"""
Run one subcommand
Args:
    argv: Arguments without the program name (sys.argv[1:] when None)
Returns:
    Process exit code
"""
def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except ValidationError as e:
        print(_describe_validation_error(e), file=sys.stderr)
        return VALIDATION_ERROR
    except (ConfigError, DataFormatError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return VALIDATION_ERROR
    except (ToolkitError, OSError) as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
