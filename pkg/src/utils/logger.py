"""
Logging configuration for the proximal Voronoi toolkit.

Console output goes to stderr so that JSON reports written to stdout stay
machine-readable. The console format is compact; log files carry timestamps
so long Lloyd runs and acceptance suites can be timed afterwards.
"""

import logging
import sys
from typing import Optional, TextIO


CONSOLE_FORMAT = '%(levelname)-7s %(name)s: %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

logger = logging.getLogger(__name__)


def setup_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    stream: Optional[TextIO] = None
) -> None:
    """
    Configure the root logger for a CLI run or script.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path; log records are appended there as well
        stream: Console stream, stderr when omitted

    Example:
        >>> setup_logging("DEBUG", "logs/lloyd.log")
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root_logger.addHandler(console_handler)

    targets = ["stderr"]
    if log_file:
        try:
            file_handler = logging.FileHandler(log_file, mode='a')
            file_handler.setLevel(numeric_level)
            file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT))
            root_logger.addHandler(file_handler)
            targets.append(log_file)
        except OSError as e:
            logger.error(f"Cannot write log file {log_file}: {e}")

    logger.debug(f"Logging at {level.upper()} to {', '.join(targets)}")


def get_logger(name: str) -> logging.Logger:
    """Logger for a module or script, typically ``get_logger(__name__)``."""
    return logging.getLogger(name)
