import logging
from typing import Union

"""
Logging helpers
Library modules log through logging.getLogger(__name__); the command line
calls configure_logging once at startup
"""

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


"""
Configure the root logger for the toolkit
Args:
    level: Level name ("INFO", "DEBUG", ...) or numeric level
Returns:
    The toolkit's top-level logger
"""
def configure_logging(level: Union[str, int] = "INFO") -> logging.Logger:
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
    logger = logging.getLogger("src")
    logger.setLevel(level)
    return logger
