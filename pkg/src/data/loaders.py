from typing import Type

from src.data.base_loader import BaseLoader
from src.data.dataset import InteractionDataset
from src.utils.errors import DataFormatError

"""
Interaction file loaders for the two public benchmark layouts
"""


"""
Load a pair-list file: one "user_id item_id" interaction per line
Example:
    >>> ds = PairListLoader("ratings.txt").load()
"""
class PairListLoader(BaseLoader):

    format_name = "pair-list"

    def parse_row(self, tokens: list[str], line_number: int) -> tuple[str, list[str]]:
        if len(tokens) != 2:
            raise DataFormatError(
                f"expected 'user_id item_id', got {len(tokens)} fields",
                path=str(self.file_path),
                line_number=line_number,
            )
        return tokens[0], [tokens[1]]


"""
Load an adjacency-lines file: "user_id item_id item_id ..." per line
This is the layout of the public Gowalla / Yelp2018 / Amazon-Book releases
A line holding only a user id contributes no interactions
"""
class AdjacencyLinesLoader(BaseLoader):

    format_name = "adjacency-lines"

    def parse_row(self, tokens: list[str], line_number: int) -> tuple[str, list[str]]:
        return tokens[0], tokens[1:]


"""
Mapping of format names (and short aliases) to loader classes
"""
LOADERS: dict[str, Type[BaseLoader]] = {
    "pair-list": PairListLoader,
    "pair": PairListLoader,
    "adjacency-lines": AdjacencyLinesLoader,
    "adjacency": AdjacencyLinesLoader,
}


"""
Load an interaction file
Args:
    path: Path to the file
    format: One of the LOADERS keys
Returns:
    The loaded InteractionDataset
Raises:
    DataFormatError: Unknown format, malformed row or empty file
Example:
    >>> ds = load_interactions("gowalla/train.txt", "adjacency-lines")
"""
def load_interactions(path: str, format: str = "adjacency-lines") -> InteractionDataset:
    loader_class = LOADERS.get(format)
    if loader_class is None:
        raise DataFormatError(
            f"Unsupported format: {format} (expected one of {sorted(LOADERS)})"
        )
    return loader_class(str(path)).load()
