from pathlib import Path

import numpy as np

from src.data.dataset import InteractionDataset
from src.utils.errors import DataFormatError

"""
Writers for interaction files and id maps
"""


"""
Persist the dense -> raw id maps as two-column text files
Args:
    ds: A dataset carrying raw ids (datasets built in memory use their dense ids)
    out_dir: Target directory, created if missing
Returns:
    (user map path, item map path)
"""
def save_id_maps(ds: InteractionDataset, out_dir: str) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    paths = []
    for name, count, raw in (
        ("user_ids.txt", ds.num_users, ds.user_ids),
        ("item_ids.txt", ds.num_items, ds.item_ids),
    ):
        if raw is None:
            raw = np.arange(count).astype(str)
        path = out / name
        with open(path, "w", encoding="utf-8") as f:
            for dense, token in enumerate(raw):
                f.write(f"{dense} {token}\n")
        paths.append(path)

    return paths[0], paths[1]


"""
Write a dataset in one of the loader formats, using dense ids
Args:
    ds: The dataset
    path: Output file
    format: "adjacency-lines" / "adjacency" or "pair-list" / "pair"
"""
def write_interactions(ds: InteractionDataset, path: str, format: str = "adjacency-lines") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", encoding="utf-8") as f:
        if format in ("adjacency-lines", "adjacency"):
            for user in range(ds.num_users):
                items = ds.items_of(user)
                if len(items):
                    f.write(" ".join([str(user), *map(str, items.tolist())]) + "\n")
        elif format in ("pair-list", "pair"):
            users, items = ds.pairs()
            for u, i in zip(users.tolist(), items.tolist()):
                f.write(f"{u} {i}\n")
        else:
            raise DataFormatError(f"Unsupported format: {format}")

    return path
