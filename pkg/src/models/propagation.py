from typing import Literal

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray

from src.data.dataset import InteractionDataset
from src.utils.errors import PreconditionError

"""
Degree-normalized message passing over the user-item graph
Target t receives  sum_{s in N(t)} x_s / (|N(t)|^alpha0 * |N(s)|^alpha1)
The operator is linear, so its adjoint is the same per-edge coefficients applied
in the opposite direction
"""

Direction = Literal["item_to_user", "user_to_item"]
DIRECTIONS: tuple[str, ...] = ("item_to_user", "user_to_item")


"""
One propagation step as a sparse (targets x sources) operator
Coefficients live on edges only, so zero-degree targets receive the zero vector
Attributes:
    direction: "item_to_user" or "user_to_item"
    alpha0: Exponent of the target degree
    alpha1: Exponent of the source degree
    matrix: The weighted (targets x sources) CSR matrix
Example:
    >>> op = PropagationOperator(train, "item_to_user", alpha0=1.0, alpha1=0.0)
    >>> user_messages = op.apply(item_vectors)
"""
class PropagationOperator:

    def __init__(
        self,
        graph: InteractionDataset,
        direction: Direction,
        alpha0: float,
        alpha1: float
    ):
        if direction not in DIRECTIONS:
            raise PreconditionError(f"unknown direction {direction!r}, expected one of {DIRECTIONS}")
        self.direction = direction
        self.alpha0 = float(alpha0)
        self.alpha1 = float(alpha1)

        users, items = graph.pairs()
        user_deg = graph.user_degrees.astype(np.float64)
        item_deg = graph.item_degrees.astype(np.float64)

        """
        Every edge endpoint has degree >= 1, so the powers are finite
        """
        if direction == "item_to_user":
            coeff = user_deg[users] ** -self.alpha0 * item_deg[items] ** -self.alpha1
            rows, cols, shape = users, items, (graph.num_users, graph.num_items)
        else:
            coeff = item_deg[items] ** -self.alpha0 * user_deg[users] ** -self.alpha1
            rows, cols, shape = items, users, (graph.num_items, graph.num_users)

        self.edge_coefficients = coeff
        self.matrix = sp.csr_matrix((coeff, (rows, cols)), shape=shape)
        self._adjoint = self.matrix.T.tocsr()

    @property
    def num_targets(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_sources(self) -> int:
        return self.matrix.shape[1]

    """
    Propagate source vectors to targets
    Args:
        source: (num_sources, d) matrix
    Returns:
        (num_targets, d) matrix
    Raises:
        PreconditionError: Row count mismatch
    """
    def apply(self, source: NDArray[np.float64]) -> NDArray[np.float64]:
        source = np.asarray(source, dtype=np.float64)
        if source.ndim != 2 or source.shape[0] != self.num_sources:
            raise PreconditionError(
                f"source must have shape ({self.num_sources}, d), got {source.shape}"
            )
        return np.asarray(self.matrix @ source)

    """
    Apply the adjoint: reversed direction, identical per-edge coefficient
    """
    def adjoint(self, target_grad: NDArray[np.float64]) -> NDArray[np.float64]:
        target_grad = np.asarray(target_grad, dtype=np.float64)
        if target_grad.ndim != 2 or target_grad.shape[0] != self.num_targets:
            raise PreconditionError(
                f"gradient must have shape ({self.num_targets}, d), got {target_grad.shape}"
            )
        return np.asarray(self._adjoint @ target_grad)


"""
Functional form of a single propagation step
Args:
    graph: The training interactions
    source: Per-node vectors of the source side
    direction: "item_to_user" or "user_to_item"
    alpha0: Target-degree exponent
    alpha1: Source-degree exponent
Returns:
    Per-node vectors of the target side
"""
def propagate(
    graph: InteractionDataset,
    source: NDArray[np.float64],
    direction: Direction,
    alpha0: float,
    alpha1: float
) -> NDArray[np.float64]:
    return PropagationOperator(graph, direction, alpha0, alpha1).apply(source)
