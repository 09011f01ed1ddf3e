"""
Commands module.
"""

from cli.commands import evaluate, stats, sweep, train, verify

COMMANDS = [stats, train, evaluate, verify, sweep]

__all__ = ["COMMANDS"]
