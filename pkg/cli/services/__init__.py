"""
Services module.
"""

from cli.services.data import data_service
from cli.services.training import training_service
from cli.services.evaluation import evaluation_service
from cli.services.verification import verification_service
from cli.services.sweep import sweep_service

__all__ = [
    "data_service",
    "training_service",
    "evaluation_service",
    "verification_service",
    "sweep_service",
]
