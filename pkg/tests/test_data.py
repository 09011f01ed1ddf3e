import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from src.data.dataset import InteractionDataset
from src.data.kcore import kcore_filter
from src.data.loaders import load_interactions
from src.data.splitter import split_dataset
from src.data.stats import compute_stats, partition_item_groups
from src.data.synthetic import generate_synthetic
from src.data.writers import save_id_maps, write_interactions
from src.utils.errors import DataFormatError, PreconditionError


def _write(tmp_path, text: str, name: str = "data.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def _with_item_frequencies(frequencies):
    users = [u for f in frequencies for u in range(f)]
    items = [i for i, f in enumerate(frequencies) for _ in range(f)]
    return InteractionDataset.from_pairs(
        users, items, num_users=max(max(frequencies), 1), num_items=len(frequencies)
    )


class TestLoaders:

    def test_adjacency_lines_counts(self, tmp_path):
        ds = load_interactions(_write(tmp_path, "0 1 2\n1 0\n"), "adjacency-lines")
        assert (ds.num_users, ds.num_items, ds.interaction_count) == (2, 3, 3)
        assert ds.items_of(0).tolist() == [1, 2]
        assert ds.metadata["format"] == "adjacency-lines"

    def test_pair_list_drops_duplicates(self, tmp_path):
        ds = load_interactions(_write(tmp_path, "0 1\n0 1\n"), "pair-list")
        assert ds.interaction_count == 1
        assert ds.metadata["duplicates_dropped"] == 1

    def test_aliases(self, tmp_path):
        path = _write(tmp_path, "7 3\n8 3\n")
        assert load_interactions(path, "pair").interaction_count == 2
        assert load_interactions(path, "adjacency").interaction_count == 2

    def test_raw_ids_are_densified_numerically(self, tmp_path):
        ds = load_interactions(_write(tmp_path, "10 200\n2 30\n"), "pair-list")
        assert ds.user_ids.tolist() == ["2", "10"]
        assert ds.item_ids.tolist() == ["30", "200"]
        assert ds.contains(1, 1) and ds.contains(0, 0)

    def test_malformed_row_names_line(self, tmp_path):
        path = _write(tmp_path, "0 1\n0 1 2\n")
        with pytest.raises(DataFormatError) as info:
            load_interactions(path, "pair-list")
        assert info.value.line_number == 2
        assert ":2:" in str(info.value)

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_interactions(_write(tmp_path, "\n\n"), "adjacency-lines")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_interactions(_write(tmp_path, "0 1\n"), "csv")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_interactions(tmp_path / "absent.txt", "pair-list")

    def test_invalid_utf8_names_line(self, tmp_path):
        path = tmp_path / "binary.txt"
        path.write_bytes(b"0 1\n1 \xff\n")
        with pytest.raises(DataFormatError) as info:
            load_interactions(path, "pair-list")
        assert info.value.line_number == 2


class TestDataset:

    def test_transpose_views(self, toy_dataset):
        assert toy_dataset.users_of(4).tolist() == [2, 3]
        assert toy_dataset.user_degrees.tolist() == [3, 2, 4, 1]
        assert toy_dataset.item_degrees.tolist() == [2, 2, 2, 2, 2]
        assert toy_dataset.adjacency.sum() == 10

    def test_out_of_range_ids(self):
        with pytest.raises(ValueError):
            InteractionDataset.from_pairs([0, 2], [0, 0], num_users=2)

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 6)), min_size=1, max_size=40))
    def test_rebuilding_item_users_from_user_items(self, pairs):
        users, items = zip(*pairs)
        ds = InteractionDataset.from_pairs(users, items, num_users=6, num_items=7)
        rebuilt = [[] for _ in range(ds.num_items)]
        for user, row in enumerate(ds.user_items):
            for item in row.tolist():
                rebuilt[item].append(user)
        assert rebuilt == [row.tolist() for row in ds.item_users]
        assert ds.interaction_count == len(set(pairs))


class TestKCore:

    def test_k1_is_identity(self, toy_dataset):
        core = kcore_filter(toy_dataset, 1)
        assert np.array_equal(core.user_indices, toy_dataset.user_indices)
        assert core.metadata["kcore_rounds"] == 0

    def test_star_collapses(self):
        star = InteractionDataset.from_pairs([0] * 5, range(5))
        core = kcore_filter(star, 2)
        assert core.interaction_count == 0
        assert (core.num_users, core.num_items) == (0, 0)

    def test_pendant_item_removed(self):
        users = [u for u in range(3) for _ in range(3)] + [0]
        items = [i for _ in range(3) for i in range(3)] + [3]
        core = kcore_filter(InteractionDataset.from_pairs(users, items), 2)
        assert (core.num_users, core.num_items, core.interaction_count) == (3, 3, 9)

    def test_invalid_k(self, toy_dataset):
        with pytest.raises(PreconditionError):
            kcore_filter(toy_dataset, 0)

    @pytest.mark.parametrize("k", [2, 5, 8])
    def test_filtering_twice_changes_nothing(self, synthetic_dataset, k):
        core = kcore_filter(synthetic_dataset, k)
        again = kcore_filter(core, k)
        assert again.metadata["kcore_rounds"] == 0
        assert (again.num_users, again.num_items) == (core.num_users, core.num_items)
        assert np.array_equal(again.user_indptr, core.user_indptr)
        assert np.array_equal(again.user_indices, core.user_indices)


class TestSplit:

    def test_ten_items_split_7_1_2(self):
        ds = InteractionDataset.from_pairs([0] * 10, range(10))
        split = split_dataset(ds, (0.7, 0.1, 0.2), seed=5)
        sizes = [part.interaction_count for part in (split.train, split.validation, split.test)]
        assert sizes == [7, 1, 2]

    def test_single_item_goes_to_test(self):
        ds = InteractionDataset.from_pairs([0], [0])
        split = split_dataset(ds, seed=0)
        assert split.test.interaction_count == 1
        assert split.train.interaction_count == 0

    def test_parts_are_disjoint_and_cover(self, synthetic_dataset, synthetic_split):
        parts = [set(zip(*(a.tolist() for a in p.pairs())))
                 for p in (synthetic_split.train, synthetic_split.validation, synthetic_split.test)]
        assert not (parts[0] & parts[1]) and not (parts[0] & parts[2]) and not (parts[1] & parts[2])
        everything = set(zip(*(a.tolist() for a in synthetic_dataset.pairs())))
        assert parts[0] | parts[1] | parts[2] == everything

    def test_same_seed_same_split(self, synthetic_dataset):
        a = split_dataset(synthetic_dataset, seed=4)
        b = split_dataset(synthetic_dataset, seed=4)
        assert a.test.user_indices.tobytes() == b.test.user_indices.tobytes()
        assert a.train.user_indptr.tobytes() == b.train.user_indptr.tobytes()

    def test_user_without_interactions(self):
        ds = InteractionDataset.from_pairs([0], [0], num_users=2)
        with pytest.raises(PreconditionError):
            split_dataset(ds)

    def test_bad_ratios(self, toy_dataset):
        with pytest.raises(PreconditionError):
            split_dataset(toy_dataset, (0.5, 0.5, 0.5))

    @given(
        st.lists(st.sets(st.integers(0, 9), min_size=1, max_size=10), min_size=1, max_size=8),
        st.integers(0, 2**31),
    )
    def test_parts_partition_every_user(self, rows, seed):
        users = [u for u, row in enumerate(rows) for _ in row]
        items = [i for row in rows for i in sorted(row)]
        ds = InteractionDataset.from_pairs(users, items, num_items=10)
        split = split_dataset(ds, (0.7, 0.1, 0.2), seed=seed)
        for user, row in enumerate(rows):
            parts = [set(p.items_of(user).tolist()) for p in (split.train, split.validation, split.test)]
            assert parts[0] | parts[1] | parts[2] == row
            assert sum(len(p) for p in parts) == len(row)


class TestStats:

    def test_complete_graph_density(self):
        ds = InteractionDataset.from_pairs([0, 0, 1, 1], [0, 1, 0, 1])
        assert compute_stats(ds).to_dict() == {"users": 2, "items": 2, "interactions": 4, "density": 1.0}

    def test_uniform_groups(self):
        ds = InteractionDataset.from_pairs(range(100), range(100))
        groups = partition_item_groups(ds, 10)
        assert groups.group_mass.tolist() == [10] * 10
        assert all(len(groups.items_in(g)) == 10 for g in range(10))

    def test_greedy_groups(self):
        users = [0, 0, 0, 1, 1, 1, 2, 3]
        items = [0, 2, 3, 1, 2, 3, 3, 3]
        ds = InteractionDataset.from_pairs(users, items)
        assert ds.item_degrees.tolist() == [1, 1, 2, 4]
        groups = partition_item_groups(ds, 2)
        assert groups.group_of_item.tolist() == [0, 0, 0, 1]
        assert groups.group_mass.tolist() == [4, 4]

    def test_single_group(self, toy_dataset):
        groups = partition_item_groups(toy_dataset, 1)
        assert groups.group_of_item.tolist() == [0] * 5

    def test_too_many_groups(self, toy_dataset):
        with pytest.raises(PreconditionError):
            partition_item_groups(toy_dataset, 6)

    def test_heavy_tail_fills_every_group(self):
        groups = partition_item_groups(_with_item_frequencies([1] * 10 + [50]), 5)
        assert groups.group_mass.tolist() == [4, 2, 2, 2, 50]
        assert groups.group_of_item.tolist()[-1] == 4

    def test_uniform_remainder_is_balanced(self):
        groups = partition_item_groups(_with_item_frequencies([1] * 7), 3)
        assert sorted(groups.group_mass.tolist()) == [2, 2, 3]

    def test_unseen_items_fill_the_lowest_groups(self):
        groups = partition_item_groups(_with_item_frequencies([0, 0, 0, 5, 2]), 4)
        assert groups.group_of_item.tolist() == [0, 1, 1, 3, 2]
        assert groups.group_mass.tolist() == [0, 0, 2, 5]

    @given(
        st.lists(st.one_of(st.integers(0, 3), st.integers(20, 300)), min_size=1, max_size=40),
        st.data(),
    )
    def test_groups_are_nonempty_and_balanced(self, frequencies, data):
        if sum(frequencies) == 0:
            frequencies = frequencies + [1]
        num_groups = data.draw(st.integers(1, len(frequencies)))
        groups = partition_item_groups(_with_item_frequencies(frequencies), num_groups)

        frequency = np.array(frequencies)
        sizes = np.bincount(groups.group_of_item, minlength=num_groups)
        assert (sizes > 0).all()
        assert groups.group_mass.sum() == frequency.sum()
        assert groups.group_mass.max() - groups.group_mass.min() <= frequency.max()
        for g in range(num_groups - 1):
            assert frequency[groups.items_in(g)].max() <= frequency[groups.items_in(g + 1)].min()


class TestSynthetic:

    def test_every_item_is_reachable(self, synthetic_dataset):
        assert (synthetic_dataset.item_degrees > 0).all()
        assert (synthetic_dataset.user_degrees >= 5).all()

    def test_deterministic(self):
        a = generate_synthetic(50, 30, seed=9)
        b = generate_synthetic(50, 30, seed=9)
        assert np.array_equal(a.user_indices, b.user_indices)

    def test_popularity_is_skewed(self):
        ds = generate_synthetic(500, 300, alpha=1.5, seed=7, min_degree=10)
        degrees = np.sort(ds.item_degrees)[::-1]
        top_share = degrees[:30].sum() / degrees.sum()
        assert top_share > 0.15


class TestWriters:

    def test_written_file_reloads(self, tmp_path, synthetic_dataset):
        path = write_interactions(synthetic_dataset, tmp_path / "pairs.txt", "pair-list")
        reloaded = load_interactions(path, "pair-list")
        assert reloaded.interaction_count == synthetic_dataset.interaction_count
        assert reloaded.num_items == synthetic_dataset.num_items

    def test_id_maps(self, tmp_path):
        ds = load_interactions(_write(tmp_path, "u7 a\nu3 b\n"), "pair-list")
        user_map, item_map = save_id_maps(ds, tmp_path / "maps")
        assert user_map.read_text().splitlines() == ["0 u3", "1 u7"]
        assert item_map.read_text().splitlines() == ["0 a", "1 b"]
