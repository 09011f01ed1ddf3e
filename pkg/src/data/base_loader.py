import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from src.data.dataset import InteractionDataset
from src.utils.errors import DataFormatError

logger = logging.getLogger(__name__)

"""
BaseLoader - Abstract base class for interaction file loaders
Loaders read a whitespace-separated text file and turn it into an InteractionDataset
with dense, contiguous 0-based ids
"""


"""
Sort raw id tokens: numerically when every token is an integer, lexically otherwise
"""
def _sorted_tokens(tokens: set[str]) -> list[str]:
    try:
        return sorted(tokens, key=int)
    except ValueError:
        return sorted(tokens)


"""
Abstract base class for interaction loaders
Subclasses implement iter_rows(); load() handles re-indexing and deduplication
Attributes:
    file_path: Path to the interaction file
    encoding: Character encoding (default: utf-8)
"""
class BaseLoader(ABC):

    format_name: str = ""

    def __init__(
        self,
        file_path: str,
        encoding: str = "utf-8",
        metadata: Optional[dict] = None
    ):
        self.file_path = Path(file_path)
        self.encoding = encoding
        self.extra_metadata = metadata or {}

    """
    Parse one non-empty line into (raw user id, raw item ids)
    Args:
        tokens: The whitespace-split fields of the line
        line_number: 1-based line number, for error messages
    Returns:
        The user token and a possibly empty list of item tokens
    Raises:
        DataFormatError: If the row is malformed
    """
    @abstractmethod
    def parse_row(self, tokens: list[str], line_number: int) -> tuple[str, list[str]]:
        pass

    """
    Lazily yield parsed rows one at a time
    Yields:
        (raw user id, raw item ids) per non-empty line
    Raises:
        DataFormatError: If a line is not valid in the file encoding
    """
    def iter_rows(self) -> Iterator[tuple[str, list[str]]]:
        with open(self.file_path, "rb") as f:
            for line_number, raw in enumerate(f, 1):
                try:
                    line = raw.decode(self.encoding)
                except UnicodeDecodeError as e:
                    raise DataFormatError(
                        f"not valid {self.encoding}: {e.reason}",
                        path=str(self.file_path),
                        line_number=line_number,
                    ) from e
                tokens = line.split()
                if not tokens:
                    continue
                yield self.parse_row(tokens, line_number)

    """
    Load the file as an InteractionDataset
    Returns:
        Dataset with dense ids; raw ids kept in user_ids / item_ids
    Raises:
        FileNotFoundError: If the file doesn't exist
        DataFormatError: If the file is empty or a row is malformed
    """
    def load(self) -> InteractionDataset:
        if not self.file_path.exists():
            raise FileNotFoundError(f"File not found: {self.file_path}")

        raw_users: list[str] = []
        raw_items: list[str] = []
        for user, items in self.iter_rows():
            raw_users.extend([user] * len(items))
            raw_items.extend(items)

        if not raw_users:
            raise DataFormatError("file contains no interactions", path=str(self.file_path))

        """
        Map raw tokens to contiguous ids
        """
        user_ids = np.array(_sorted_tokens(set(raw_users)))
        item_ids = np.array(_sorted_tokens(set(raw_items)))
        user_index = {token: k for k, token in enumerate(user_ids)}
        item_index = {token: k for k, token in enumerate(item_ids)}

        dataset = InteractionDataset.from_pairs(
            [user_index[u] for u in raw_users],
            [item_index[i] for i in raw_items],
            num_users=len(user_ids),
            num_items=len(item_ids),
            metadata={
                "source": str(self.file_path),
                "format": self.format_name,
                **self.extra_metadata,
            },
            user_ids=user_ids,
            item_ids=item_ids,
        )

        dropped = dataset.metadata["duplicates_dropped"]
        logger.info(
            "loaded %s: %d users, %d items, %d interactions (%d duplicates dropped)",
            self.file_path, dataset.num_users, dataset.num_items,
            dataset.interaction_count, dropped,
        )
        return dataset
