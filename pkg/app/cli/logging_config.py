"""Logging configuration for the simulator CLI.

Sets up:
- A custom TRACE level for per-solve internals.
- Console output on stderr.
- Optional rotating file output plus an error-only file, when a log
  directory is given on the command line.

The configuration is safe to call multiple times.
"""

from __future__ import annotations

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional


TRACE_LEVEL_NUM = 5
LEVEL_NAMES = ("TRACE", "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _install_trace_level() -> None:
    """Install the TRACE logging level and `Logger.trace` helper."""

    if logging.getLevelName(TRACE_LEVEL_NUM) != "TRACE":
        logging.addLevelName(TRACE_LEVEL_NUM, "TRACE")

    if not hasattr(logging.Logger, "trace"):

        def trace(self: logging.Logger, message: str, *args, **kwargs) -> None:
            if self.isEnabledFor(TRACE_LEVEL_NUM):
                self._log(TRACE_LEVEL_NUM, message, args, **kwargs)

        logging.Logger.trace = trace  # type: ignore[attr-defined]


def resolve_level(log_level: str) -> int:
    """Map a level name to its numeric value.

    Raises:
        ValueError: When the name is not a known level.
    """

    name = str(log_level or "").strip().upper() or "INFO"
    if name == "TRACE":
        return TRACE_LEVEL_NUM
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        raise ValueError(f"Invalid log level: {log_level}")
    return level


def configure_logging(
    *,
    log_level: str = "INFO",
    log_dir: Optional[str] = None,
    log_filename: str = "maxbloch.log",
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5,
) -> None:
    """Configure process-wide logging.

    Args:
        log_level: Root log level name (TRACE, DEBUG, INFO, ...).
        log_dir: Directory for log files; None logs to the console only.
        log_filename: Log file name within log_dir.
        max_bytes: Rotate the log file after this size.
        backup_count: Number of rotated files to keep.

    Raises:
        ValueError: When log_level is invalid.
    """

    _install_trace_level()

    root = logging.getLogger()
    if getattr(root, "_maxbloch_logging_configured", False):
        return

    resolved_level = resolve_level(log_level)
    root.setLevel(resolved_level)

    formatter = logging.Formatter(fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s", datefmt="%Y-%m-%d %H:%M:%S")

    console_handler = logging.StreamHandler()
    console_handler.setLevel(resolved_level)
    console_handler.setFormatter(formatter)
    root.addHandler(console_handler)

    if log_dir:
        log_path = Path(log_dir) / log_filename
        error_log_path = Path(log_dir) / f"{log_path.stem}.error{log_path.suffix or '.log'}"
        try:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                filename=str(log_path), maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
            )
            file_handler.setLevel(resolved_level)
            file_handler.setFormatter(formatter)
            root.addHandler(file_handler)

            error_file_handler = RotatingFileHandler(
                filename=str(error_log_path), maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
            )
            error_file_handler.setLevel(logging.ERROR)
            error_file_handler.setFormatter(formatter)
            root.addHandler(error_file_handler)
        except OSError:
            logging.getLogger(__name__).warning(
                "Failed to configure file logging under %s; continuing with console-only logging",
                log_dir,
            )

    logging.captureWarnings(True)
    root._maxbloch_logging_configured = True  # type: ignore[attr-defined]


def get_logger(name: Optional[str] = None) -> logging.Logger:
    _install_trace_level()
    return logging.getLogger(name or __name__)
