import logging
from abc import ABC, abstractmethod
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.data.dataset import InteractionDataset
from src.models.embedding_table import EmbeddingTable, Representations
from src.models.propagation import PropagationOperator
from src.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

"""
Recommenders - Map layer-0 ID embeddings to final user/item representations
MF - Identity model
SVDpp_user - User vector plus a normalized sum of its items' layer-0 vectors
SVDpp_item - Item vector plus a normalized sum of its users' layer-0 vectors
LightGCN - K alternating symmetric propagations, layers averaged with 1/(K+1)

All models are linear in the embedding tables, so backward applies the adjoint
of the same operators in reverse order
"""

RecommenderKind = Literal["MF", "SVDpp_user", "SVDpp_item", "LightGCN"]
LIGHTGCN_ALPHA = 0.5


"""
Model section of an experiment config
Attributes:
    kind: MF, SVDpp_user, SVDpp_item or LightGCN
    alpha0: Target-degree exponent (SVD++ variants)
    alpha1: Source-degree exponent (SVD++ variants)
    layers: Number of LightGCN layers K (0 reduces to MF)
"""
class RecommenderConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: RecommenderKind = "MF"
    alpha0: float = Field(default=1.0, ge=0.0)
    alpha1: float = Field(default=0.0, ge=0.0)
    layers: int = Field(default=2, ge=0)


"""
Base class for all recommenders
A recommender is bound to one training graph; its propagation operators are
built once and reused for every forward and backward pass
"""
class BaseRecommender(ABC):

    def __init__(self, config: RecommenderConfig, graph: InteractionDataset):
        self.config = config
        self.graph = graph

    """
    Final representations from the embedding tables
    """
    @abstractmethod
    def forward(self, emb: EmbeddingTable) -> Representations:
        pass

    """
    Gradients w.r.t. the embedding tables from gradients w.r.t. the representations
    """
    @abstractmethod
    def backward(self, grad: Representations) -> EmbeddingTable:
        pass

    def _check_table(self, emb: EmbeddingTable):
        if emb.num_users != self.graph.num_users or emb.num_items != self.graph.num_items:
            raise PreconditionError(
                f"embedding table is {emb.num_users}x{emb.num_items}, "
                f"graph is {self.graph.num_users}x{self.graph.num_items}"
            )

    def _check_grad(self, grad: Representations):
        if grad.z_user.shape[0] != self.graph.num_users or grad.z_item.shape[0] != self.graph.num_items:
            raise PreconditionError(
                f"gradient rows {grad.z_user.shape[0]}x{grad.z_item.shape[0]} do not match "
                f"graph {self.graph.num_users}x{self.graph.num_items}"
            )
        if not grad.is_finite():
            raise PreconditionError("representation gradients must be finite")


class MFRecommender(BaseRecommender):

    def forward(self, emb: EmbeddingTable) -> Representations:
        self._check_table(emb)
        return Representations(z_user=emb.user_vecs.copy(), z_item=emb.item_vecs.copy())

    def backward(self, grad: Representations) -> EmbeddingTable:
        self._check_grad(grad)
        return EmbeddingTable(user_vecs=grad.z_user.copy(), item_vecs=grad.z_item.copy())


"""
z_u = p_u + sum_{i in P_u} q_i / (|P_u|^alpha0 |P_i|^alpha1),  z_i = q_i
"""
class SVDppUserRecommender(BaseRecommender):

    def __init__(self, config: RecommenderConfig, graph: InteractionDataset):
        super().__init__(config, graph)
        self.operator = PropagationOperator(graph, "item_to_user", config.alpha0, config.alpha1)

    def forward(self, emb: EmbeddingTable) -> Representations:
        self._check_table(emb)
        return Representations(
            z_user=emb.user_vecs + self.operator.apply(emb.item_vecs),
            z_item=emb.item_vecs.copy(),
        )

    def backward(self, grad: Representations) -> EmbeddingTable:
        self._check_grad(grad)
        return EmbeddingTable(
            user_vecs=grad.z_user.copy(),
            item_vecs=grad.z_item + self.operator.adjoint(grad.z_user),
        )


"""
Item-side mirror: z_i = q_i + sum_{u in P_i} p_u / (|P_i|^alpha0 |P_u|^alpha1),  z_u = p_u
"""
class SVDppItemRecommender(BaseRecommender):

    def __init__(self, config: RecommenderConfig, graph: InteractionDataset):
        super().__init__(config, graph)
        self.operator = PropagationOperator(graph, "user_to_item", config.alpha0, config.alpha1)

    def forward(self, emb: EmbeddingTable) -> Representations:
        self._check_table(emb)
        return Representations(
            z_user=emb.user_vecs.copy(),
            z_item=emb.item_vecs + self.operator.apply(emb.user_vecs),
        )

    def backward(self, grad: Representations) -> EmbeddingTable:
        self._check_grad(grad)
        return EmbeddingTable(
            user_vecs=grad.z_user + self.operator.adjoint(grad.z_item),
            item_vecs=grad.z_item.copy(),
        )


"""
LightGCN with fixed symmetric normalization (alpha0 = alpha1 = 0.5)
Layer k propagates the outputs of layer k-1; alpha0/alpha1 of the config are ignored
"""
class LightGCNRecommender(BaseRecommender):

    def __init__(self, config: RecommenderConfig, graph: InteractionDataset):
        super().__init__(config, graph)
        self.layers = config.layers
        self.to_user = PropagationOperator(graph, "item_to_user", LIGHTGCN_ALPHA, LIGHTGCN_ALPHA)
        self.to_item = PropagationOperator(graph, "user_to_item", LIGHTGCN_ALPHA, LIGHTGCN_ALPHA)

    def forward(self, emb: EmbeddingTable) -> Representations:
        self._check_table(emb)
        users, items = emb.user_vecs, emb.item_vecs
        user_sum, item_sum = users.copy(), items.copy()

        for _ in range(self.layers):
            users, items = self.to_user.apply(items), self.to_item.apply(users)
            user_sum += users
            item_sum += items

        scale = 1.0 / (self.layers + 1)
        return Representations(z_user=user_sum * scale, z_item=item_sum * scale)

    def backward(self, grad: Representations) -> EmbeddingTable:
        self._check_grad(grad)
        scale = 1.0 / (self.layers + 1)
        direct_user = grad.z_user * scale
        direct_item = grad.z_item * scale

        """
        Walk the layers backwards: the gradient reaching layer k-1 is its direct
        share of the average plus the adjoint of what layer k received from it
        """
        users, items = direct_user, direct_item
        for _ in range(self.layers):
            users, items = (
                direct_user + self.to_item.adjoint(items),
                direct_item + self.to_user.adjoint(users),
            )

        return EmbeddingTable(user_vecs=users, item_vecs=items)


RECOMMENDERS: dict[str, type[BaseRecommender]] = {
    "MF": MFRecommender,
    "SVDpp_user": SVDppUserRecommender,
    "SVDpp_item": SVDppItemRecommender,
    "LightGCN": LightGCNRecommender,
}


"""
Create a recommender bound to the training graph
Args:
    config: Model configuration
    graph: The training split only
Raises:
    PreconditionError: Unsupported kind
"""
def build_recommender(config: RecommenderConfig, graph: InteractionDataset) -> BaseRecommender:
    recommender_class = RECOMMENDERS.get(config.kind)
    if recommender_class is None:
        raise PreconditionError(f"unsupported model kind {config.kind!r}")
    logger.debug("building %s recommender", config.kind)
    return recommender_class(config, graph)


def forward(config: RecommenderConfig, emb: EmbeddingTable, graph: InteractionDataset) -> Representations:
    return build_recommender(config, graph).forward(emb)


def backward(config: RecommenderConfig, graph: InteractionDataset, grad_repr: Representations) -> EmbeddingTable:
    return build_recommender(config, graph).backward(grad_repr)


def representation_norms(representations: Representations) -> tuple[float, float]:
    return representations.mean_norms()
