"""
Similarity functions for vector operations
Scores between user and item representations are built from these helpers,
both for single pairs and for whole rows of a representation table
"""
import numpy as np
from numpy.typing import NDArray

"""
Vectors with a smaller norm are treated as having no direction
"""
NORM_EPSILON = 1e-12


"""
Calculate the dot product between two vectors
Args:
    vec_a: First vector (1D numpy array)
    vec_b: Second vector (1D numpy array)
Returns:
    Dot product value
Example:
    >>> import numpy as np
    >>> a = np.array([1.0, 2.0])
    >>> b = np.array([3.0, 4.0])
    >>> dot_product(a, b)
    11.0
"""
def dot_product(
    vec_a: NDArray[np.float64],
    vec_b: NDArray[np.float64]
) -> float:
    return float(np.dot(vec_a, vec_b))


"""
Calculate the cosine similarity between two vectors
A value of 1 means identical direction, 0 means orthogonal, -1 means opposite
Formula: cos(θ) = (A · B) / (||A|| × ||B||)
Vectors with norm below NORM_EPSILON have no direction and score 0
Args:
    vec_a: First vector (1D numpy array)
    vec_b: Second vector (1D numpy array)
Returns:
    Cosine similarity score between -1 and 1
Example:
    >>> a = np.array([1.0, 0.0, 0.0])
    >>> cosine_similarity(a, np.array([0.0, 1.0, 0.0]))
    0.0
"""
def cosine_similarity(
    vec_a: NDArray[np.float64],
    vec_b: NDArray[np.float64]
) -> float:
    norm_a = np.linalg.norm(vec_a)
    norm_b = np.linalg.norm(vec_b)

    if norm_a < NORM_EPSILON or norm_b < NORM_EPSILON:
        return 0.0

    similarity = np.dot(vec_a, vec_b) / (norm_a * norm_b)

    """
    Clamp to [-1, 1] to handle floating point errors
    """
    return float(np.clip(similarity, -1.0, 1.0))


"""
Normalize the last axis of an array to unit length
Rows with norm below NORM_EPSILON become zero rows
Args:
    vectors: Array of shape (..., d)
Returns:
    (unit vectors, norms) with norms of shape (...)
"""
def normalize_rows(
    vectors: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    norms = np.linalg.norm(vectors, axis=-1)
    safe = np.where(norms < NORM_EPSILON, 1.0, norms)
    unit = vectors / safe[..., None]
    unit[norms < NORM_EPSILON] = 0.0
    return unit, norms


"""
Pull a gradient taken w.r.t. unit vectors back to the raw vectors
For s = z / ||z||:  dL/dz = (dL/ds - (dL/ds · s) s) / ||z||
The result is orthogonal to z, which is why cosine scores cannot move magnitudes
Args:
    grad_unit: Gradient w.r.t. the unit vectors, shape (..., d)
    unit: The unit vectors, shape (..., d)
    norms: Norms of the raw vectors, shape (...)
Returns:
    Gradient w.r.t. the raw vectors (zero for directionless rows)
"""
def unit_vector_backward(
    grad_unit: NDArray[np.float64],
    unit: NDArray[np.float64],
    norms: NDArray[np.float64]
) -> NDArray[np.float64]:
    radial = np.sum(grad_unit * unit, axis=-1, keepdims=True)
    tangent = grad_unit - radial * unit
    safe = np.where(norms < NORM_EPSILON, np.inf, norms)
    return tangent / safe[..., None]
