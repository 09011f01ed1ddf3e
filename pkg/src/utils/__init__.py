"""
Utils module - Shared errors, logging, random streams and similarity helpers.
"""

from src.utils.errors import (
    ToolkitError,
    DataFormatError,
    PreconditionError,
    DivergenceError,
    ConfigError,
    VerificationError,
)
from src.utils.logging import configure_logging
from src.utils.rng import make_rng, spawn_rngs
from src.utils.similarity import (
    NORM_EPSILON,
    cosine_similarity,
    dot_product,
    normalize_rows,
    unit_vector_backward,
)

__all__ = [
    "ToolkitError",
    "DataFormatError",
    "PreconditionError",
    "DivergenceError",
    "ConfigError",
    "VerificationError",
    "configure_logging",
    "make_rng",
    "spawn_rngs",
    "NORM_EPSILON",
    "cosine_similarity",
    "dot_product",
    "normalize_rows",
    "unit_vector_backward",
]
