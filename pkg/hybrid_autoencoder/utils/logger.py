"""
Package logger for the hybrid autoencoder.

Modules log through children of ``hybrid_autoencoder`` (``get_logger("trainer")``
gives ``hybrid_autoencoder.trainer``) and share its handlers, so the CLI's
``--verbose`` and ``--log-file`` settings apply to every module.
Records go to stdout; stderr is left to the CLI's error messages.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

LOG_FORMAT = "[%(asctime)s] [%(name)s] [%(levelname)s] %(message)s"

logger = logging.getLogger("hybrid_autoencoder")
logger.setLevel(logging.INFO)

formatter = logging.Formatter(LOG_FORMAT)

console_handler = logging.StreamHandler(sys.stdout)
console_handler.setLevel(logging.INFO)
console_handler.setFormatter(formatter)
logger.addHandler(console_handler)


def get_logger(name: str) -> logging.Logger:
    """Return a child of the package logger, e.g. ``hybrid_autoencoder.trainer``"""
    return logger.getChild(name)


def setup_logger(log_file: Optional[str] = None, level: int = logging.INFO):
    """
    Apply the run's log level and attach a file handler when asked

    Args:
        log_file: Also write records here; parent directories are created
        level: ``logging.DEBUG`` adds per-step losses and SWAP insertions
    """
    logger.setLevel(level)
    console_handler.setLevel(level)

    if log_file:
        os.makedirs(Path(log_file).parent, exist_ok=True)

        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        logger.info(f"Logging to file: {log_file}")
