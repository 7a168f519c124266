"""
Logger configuration using Loguru.
Diagnostics go to stderr (stdout is reserved for JSON reports), plus an
optional rotating file when QCAT_LOG_FILE is set.
"""

import sys
from pathlib import Path
from loguru import logger

CONSOLE_FORMAT = "<level>{level: <8}</level> | <cyan>{name}:{function}</cyan> | <level>{message}</level>"
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}"


def setup_logger(log_level: str = "WARNING", log_file: str = ""):
    """Route loguru to stderr (and `log_file` if given); ValueError on an unknown level."""
    level = str(log_level).strip().upper()
    try:
        logger.level(level)
    except ValueError as e:
        raise ValueError(f"unknown log level {log_level!r}") from e

    logger.remove()
    # colorize only when stderr is a terminal
    logger.add(sys.stderr, level=level, format=CONSOLE_FORMAT, colorize=None)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(log_path),
            level=level,
            format=FILE_FORMAT,
            rotation="10 MB",
            retention="30 days",
            compression="zip",
            encoding="utf-8",
        )
        logger.debug(f"Logging to {log_path}")

    return logger
