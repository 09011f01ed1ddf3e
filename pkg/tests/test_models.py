import numpy as np
import pytest

from src.data.dataset import InteractionDataset
from src.models.embedding_table import EmbeddingTable, Representations, init_xavier, load_embeddings, save_embeddings
from src.models.propagation import PropagationOperator, propagate
from src.models.recommender import RecommenderConfig, backward, build_recommender, forward, representation_norms
from src.theory.gradcheck import random_graph
from src.utils.errors import DataFormatError, PreconditionError
from src.utils.rng import make_rng

MODEL_CONFIGS = [
    RecommenderConfig(kind="MF"),
    RecommenderConfig(kind="SVDpp_user", alpha0=0.5, alpha1=0.5),
    RecommenderConfig(kind="SVDpp_item", alpha0=1.0, alpha1=0.0),
    RecommenderConfig(kind="LightGCN", layers=2),
    RecommenderConfig(kind="LightGCN", layers=3),
]


def _dense(ds: InteractionDataset) -> np.ndarray:
    return ds.adjacency.toarray()


class TestPropagation:

    def test_zero_exponents_sum_neighbors(self, toy_dataset):
        x = make_rng(0).normal(size=(toy_dataset.num_items, 3))
        out = propagate(toy_dataset, x, "item_to_user", 0.0, 0.0)
        np.testing.assert_allclose(out, _dense(toy_dataset) @ x, atol=1e-12)

    def test_single_neighbor_copies_source(self):
        """
        item 0 holds only user 2, item 1 holds users 0 and 1
        """
        ds = InteractionDataset.from_pairs([0, 1, 2], [1, 1, 0])
        users = make_rng(1).normal(size=(3, 4))
        out = propagate(ds, users, "user_to_item", 1.0, 0.0)
        np.testing.assert_allclose(out[0], users[2], atol=1e-12)
        np.testing.assert_allclose(out[1], (users[0] + users[1]) / 2, atol=1e-12)

    def test_symmetric_normalization_two_by_two(self):
        ds = InteractionDataset.from_pairs([0, 0, 1], [0, 1, 1])
        a = _dense(ds)
        du = a.sum(axis=1)
        di = a.sum(axis=0)
        oracle = a / np.sqrt(du)[:, None] / np.sqrt(di)[None, :]
        op = PropagationOperator(ds, "item_to_user", 0.5, 0.5)
        np.testing.assert_allclose(op.matrix.toarray(), oracle, atol=1e-12)

    def test_single_edge_adjoint_coefficient(self):
        ds = InteractionDataset.from_pairs([0], [0])
        op = PropagationOperator(ds, "item_to_user", 0.7, 0.3)
        assert op.matrix[0, 0] == op._adjoint[0, 0]

    def test_shape_mismatch(self, toy_dataset):
        op = PropagationOperator(toy_dataset, "item_to_user", 1.0, 0.0)
        with pytest.raises(PreconditionError):
            op.apply(np.zeros((3, 2)))
        with pytest.raises(PreconditionError):
            op.adjoint(np.zeros((5, 2)))

    def test_unknown_direction(self, toy_dataset):
        with pytest.raises(PreconditionError):
            PropagationOperator(toy_dataset, "sideways", 1.0, 0.0)


class TestForward:

    def test_mf_is_identity(self, toy_dataset):
        table = init_xavier(4, 5, 6, seed=2)
        reps = forward(RecommenderConfig(kind="MF"), table, toy_dataset)
        np.testing.assert_array_equal(reps.z_user, table.user_vecs)
        np.testing.assert_array_equal(reps.z_item, table.item_vecs)

    def test_svdpp_user_single_neighbor(self, toy_dataset):
        table = init_xavier(4, 5, 6, seed=2)
        reps = forward(RecommenderConfig(kind="SVDpp_user", alpha0=1.0, alpha1=0.0), table, toy_dataset)
        np.testing.assert_allclose(reps.z_user[3], table.user_vecs[3] + table.item_vecs[4], atol=1e-12)
        np.testing.assert_array_equal(reps.z_item, table.item_vecs)

    def test_lightgcn_matches_dense_oracle(self):
        ds = InteractionDataset.from_pairs([0, 0, 1, 2, 2], [0, 1, 1, 1, 2])
        table = init_xavier(3, 3, 4, seed=5)
        a = _dense(ds)
        norm = a / np.sqrt(a.sum(axis=1))[:, None] / np.sqrt(a.sum(axis=0))[None, :]

        users, items = [table.user_vecs], [table.item_vecs]
        for _ in range(2):
            users.append(norm @ items[-1])
            items.append(norm.T @ users[-2])
        reps = forward(RecommenderConfig(kind="LightGCN", layers=2), table, ds)
        np.testing.assert_allclose(reps.z_user, sum(users) / 3, atol=1e-10)
        np.testing.assert_allclose(reps.z_item, sum(items) / 3, atol=1e-10)

    def test_lightgcn_zero_layers_is_mf(self, toy_dataset):
        table = init_xavier(4, 5, 3, seed=1)
        reps = forward(RecommenderConfig(kind="LightGCN", layers=0), table, toy_dataset)
        np.testing.assert_array_equal(reps.z_user, table.user_vecs)

    def test_table_must_match_graph(self, toy_dataset):
        with pytest.raises(PreconditionError):
            forward(RecommenderConfig(), init_xavier(3, 5, 2), toy_dataset)

    def test_representation_norms(self):
        reps = Representations(z_user=np.array([[3.0, 4.0]]), z_item=np.array([[1.0, 0.0], [0.0, 2.0]]))
        assert representation_norms(reps) == (5.0, 1.5)


class TestBackward:

    @pytest.mark.parametrize("config", MODEL_CONFIGS, ids=lambda c: f"{c.kind}-{c.layers}")
    def test_adjoint_identity(self, config):
        rng = make_rng(3)
        graph = random_graph(6, 9, rng)
        x = EmbeddingTable(user_vecs=rng.normal(size=(6, 4)), item_vecs=rng.normal(size=(9, 4)))
        y = Representations(z_user=rng.normal(size=(6, 4)), z_item=rng.normal(size=(9, 4)))
        model = build_recommender(config, graph)
        fx = model.forward(x)
        bty = model.backward(y)
        lhs = np.sum(fx.z_user * y.z_user) + np.sum(fx.z_item * y.z_item)
        rhs = np.sum(x.user_vecs * bty.user_vecs) + np.sum(x.item_vecs * bty.item_vecs)
        assert abs(lhs - rhs) < 1e-10

    def test_mf_passes_gradients_through(self, toy_dataset):
        grad = Representations(z_user=np.ones((4, 2)), z_item=np.full((5, 2), 2.0))
        out = backward(RecommenderConfig(kind="MF"), toy_dataset, grad)
        np.testing.assert_array_equal(out.user_vecs, grad.z_user)
        np.testing.assert_array_equal(out.item_vecs, grad.z_item)

    def test_non_finite_gradient(self, toy_dataset):
        grad = Representations(z_user=np.full((4, 2), np.nan), z_item=np.zeros((5, 2)))
        with pytest.raises(PreconditionError):
            backward(RecommenderConfig(kind="MF"), toy_dataset, grad)


class TestEmbeddingTable:

    def test_xavier_bound(self):
        table = init_xavier(20, 30, 64, seed=0)
        bound = np.sqrt(6.0 / 128)
        assert table.metadata["bound"] == pytest.approx(0.2165, abs=1e-4)
        assert np.abs(table.flatten()).max() <= bound

    def test_xavier_deterministic(self):
        a, b = init_xavier(5, 6, 8, seed=7), init_xavier(5, 6, 8, seed=7)
        np.testing.assert_array_equal(a.flatten(), b.flatten())

    @pytest.mark.slow
    def test_xavier_mean(self):
        table = init_xavier(10_000, 5_625, 64, seed=0)
        values = table.flatten()
        sigma = table.metadata["bound"] / np.sqrt(3.0)
        assert values.size == 1_000_000
        assert abs(values.mean()) < 3 * sigma / np.sqrt(values.size)

    def test_invalid_dim(self):
        with pytest.raises(PreconditionError):
            init_xavier(2, 2, 0)

    def test_checkpoint_round_trip(self, tmp_path):
        table = init_xavier(3, 4, 5, seed=1)
        loaded = load_embeddings(save_embeddings(table, tmp_path / "emb.bin"))
        np.testing.assert_array_equal(loaded.user_vecs, table.user_vecs)
        np.testing.assert_array_equal(loaded.item_vecs, table.item_vecs)

    def test_checkpoint_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTEMB\x00\x00" + bytes(28))
        with pytest.raises(DataFormatError):
            load_embeddings(path)

    def test_checkpoint_rejects_truncated_body(self, tmp_path):
        path = save_embeddings(init_xavier(2, 2, 2), tmp_path / "emb.bin")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(DataFormatError):
            load_embeddings(path)
