import logging
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from src.data.dataset import InteractionDataset
from src.losses.batch import Batch
from src.losses.config import LossConfig
from src.losses.objective import evaluate_objective, grad_wrt_representations
from src.models.embedding_table import EmbeddingTable, init_xavier
from src.models.recommender import RecommenderConfig, build_recommender
from src.sampling.samplers import SamplerConfig, build_sampler
from src.utils.errors import PreconditionError, VerificationError
from src.utils.rng import spawn_rngs

logger = logging.getLogger(__name__)

"""
Finite-difference gradient oracle
The analytic pipeline (loss gradient, cosine chain rule, recommender adjoint)
is compared coordinate by coordinate against central differences
"""

LOSS_KINDS = ("BCE", "BPR", "SM", "CCL", "SSM")
MODEL_KINDS = ("MF", "SVDpp_user", "SVDpp_item", "LightGCN")
SIMILARITIES = ("inner_product", "cosine")


"""
Central-difference gradient of a scalar function
Args:
    loss_evaluator: Pure function of the parameter array
    params: Point of evaluation (any shape, not modified)
    epsilon: Step in [1e-7, 1e-4]
Returns:
    Gradient with the shape of params
Raises:
    PreconditionError: epsilon out of range
    VerificationError: Non-finite function value
Example:
    >>> finite_diff_grad(lambda x: float(x[0] ** 2), np.array([3.0]))
    array([6.])
"""
def finite_diff_grad(
    loss_evaluator: Callable[[NDArray[np.float64]], float],
    params: NDArray[np.float64],
    epsilon: float = 1e-6
) -> NDArray[np.float64]:
    if not 1e-7 <= epsilon <= 1e-4:
        raise PreconditionError(f"epsilon must be in [1e-7, 1e-4], got {epsilon}")

    point = np.array(params, dtype=np.float64)
    flat = point.reshape(-1)
    grad = np.zeros_like(flat)

    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + epsilon
        upper = loss_evaluator(point)
        flat[index] = original - epsilon
        lower = loss_evaluator(point)
        flat[index] = original
        if not (np.isfinite(upper) and np.isfinite(lower)):
            raise VerificationError(f"non-finite evaluation at coordinate {index}")
        grad[index] = (upper - lower) / (2.0 * epsilon)

    return grad.reshape(point.shape)


"""
Scale-aware relative error: max |a - n| over max(|a|, |n|)
"""
def relative_error(analytic: NDArray[np.float64], numeric: NDArray[np.float64]) -> float:
    scale = max(float(np.abs(analytic).max(initial=0.0)), float(np.abs(numeric).max(initial=0.0)), 1e-12)
    return float(np.abs(analytic - numeric).max(initial=0.0) / scale)


"""
Small random interaction graph with every user holding 2 to 4 items
"""
def random_graph(num_users: int, num_items: int, rng: np.random.Generator) -> InteractionDataset:
    users, items = [], []
    for user in range(num_users):
        degree = int(rng.integers(2, min(4, num_items - 1) + 1))
        chosen = rng.choice(num_items, size=degree, replace=False)
        users.extend([user] * degree)
        items.extend(chosen.tolist())
    return InteractionDataset.from_pairs(users, items, num_users=num_users, num_items=num_items)


"""
Compare analytic and numeric gradients of one loss/model/similarity combination
Args:
    loss: Loss configuration
    model: Recommender configuration
    seed: Seed of the random instance
    num_users, num_items, dim: Instance size
    epsilon: Finite-difference step
Returns:
    Relative error between the two gradients w.r.t. the layer-0 tables
"""
def check_gradient(
    loss: LossConfig,
    model: RecommenderConfig,
    seed: int = 0,
    num_users: int = 5,
    num_items: int = 7,
    dim: int = 8,
    epsilon: float = 1e-6
) -> float:
    graph_rng, sample_rng = spawn_rngs(seed, 2)
    graph = random_graph(num_users, num_items, graph_rng)
    table = init_xavier(num_users, num_items, dim, seed=seed)
    recommender = build_recommender(model, graph)

    users, items = graph.pairs()
    sampler = build_sampler(SamplerConfig(strategy="uniform", negatives_per_positive=3), loss, graph)
    batch: Batch = sampler.sample(users, items, sample_rng)

    def objective(vector: NDArray[np.float64]) -> float:
        candidate = EmbeddingTable.unflatten(vector, num_users, num_items, dim)
        return evaluate_objective(loss, batch, recommender.forward(candidate))

    _, grad_reps, _ = grad_wrt_representations(loss, batch, recommender.forward(table))
    analytic = recommender.backward(grad_reps).flatten()
    numeric = finite_diff_grad(objective, table.flatten(), epsilon)
    return relative_error(analytic, numeric)


"""
Run check_gradient over every loss x model x similarity combination
Returns:
    {(loss, model, similarity): relative error}
"""
def gradient_matrix(seed: int = 0, layers: int = 2) -> dict[tuple[str, str, str], float]:
    errors = {}
    for loss_kind in LOSS_KINDS:
        for model_kind in MODEL_KINDS:
            for similarity in SIMILARITIES:
                loss = LossConfig(kind=loss_kind, similarity=similarity, temperature=0.2)
                model = RecommenderConfig(kind=model_kind, alpha0=0.5, alpha1=0.5, layers=layers)
                error = check_gradient(loss, model, seed=seed)
                errors[(loss_kind, model_kind, similarity)] = error
                logger.debug("gradient %s/%s/%s rel err %.2e", loss_kind, model_kind, similarity, error)
    return errors
