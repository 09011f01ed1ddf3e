"""
Sampling module - Negative examples for the training losses.
"""

from src.sampling.negatives import (
    sample_uniform,
    sample_uniform_many,
    in_batch_negative_matrix,
    in_batch_negatives,
    inclusion_frequencies,
)
from src.sampling.samplers import (
    SamplerConfig,
    NegativeSampler,
    UniformSampler,
    InBatchSampler,
    CatalogSampler,
    build_sampler,
)

__all__ = [
    "sample_uniform",
    "sample_uniform_many",
    "in_batch_negative_matrix",
    "in_batch_negatives",
    "inclusion_frequencies",
    "SamplerConfig",
    "NegativeSampler",
    "UniformSampler",
    "InBatchSampler",
    "CatalogSampler",
    "build_sampler",
]
