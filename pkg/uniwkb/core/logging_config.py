"""
logging_config.py
-----------------
One place to build module loggers.

Set UNIWKB_LOG_LEVEL=DEBUG (or LOG_LEVEL in .env) for solver traces.
"""
from __future__ import annotations

import logging
import os

from uniwkb.core import config

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _level() -> int:
    name = os.getenv("UNIWKB_LOG_LEVEL", config.LOG_LEVEL).upper()
    return getattr(logging, name, logging.INFO)


def get_logger(name: str) -> logging.Logger:
    """Return a configured logger; repeated calls never stack handlers."""
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    logger.setLevel(_level())
    return logger
