import logging
from typing import Optional

from app.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure the root logger once for the CLI and the API process.

    Args:
        level (Optional[str]): Level name; falls back to settings.LOG_LEVEL
    """
    name = (level or settings.LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, name, logging.WARNING), format=LOG_FORMAT)
    logging.getLogger().setLevel(getattr(logging, name, logging.WARNING))
