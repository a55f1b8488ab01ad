import logging
from typing import Optional

from lpslice.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Attach a single stderr handler to the package logger"""
    logger = logging.getLogger("lpslice")
    logger.setLevel((level or settings.LOG_LEVEL).upper())
    if not any(getattr(h, "_lpslice", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._lpslice = True
        logger.addHandler(handler)
    logger.propagate = False
    return logger
