"""Logging configuration."""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler

logger = logging.getLogger(__name__)

LOG_LEVELS = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def resolve_log_level(value: Optional[Union[str, int]], verbose: bool = False) -> int:
    """Map a ``LOTTO_LOG_LEVEL`` value to a logging level.

    ``verbose`` always wins. Unknown names fall back to INFO.
    """
    if verbose:
        return logging.DEBUG
    if value is None or value == "":
        return logging.INFO
    if isinstance(value, int):
        return value

    level = LOG_LEVELS.get(value.strip().lower())
    if level is None:
        logger.warning(
            f"Unknown log level '{value}', using info (choose from {', '.join(LOG_LEVELS)})"
        )
        return logging.INFO
    return level


def setup_logger(
    name: str = "src",
    level: int = logging.INFO,
    log_file: Optional[str] = None,
    format_string: Optional[str] = None,
    console: Optional[Console] = None,
) -> logging.Logger:
    """Set up and return a configured logger.

    Args:
        name: Logger name. Module loggers live under ``src.*``.
        level: Logging level.
        log_file: Optional file path for log output.
        format_string: Optional custom format string.
        console: When given, log through a rich handler on this console.

    Returns:
        Configured logger instance.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Clear existing handlers
    logger.handlers.clear()

    if console is not None:
        handler: logging.Handler = RichHandler(console=console, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    else:
        if format_string is None:
            format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(format_string))
    handler.setLevel(level)
    logger.addHandler(handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(level)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        logger.addHandler(file_handler)

    return logger
