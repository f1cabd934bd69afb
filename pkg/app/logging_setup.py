from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler

from .config import settings

__all__ = ["setup_logging"]

_CONFIGURED = False


def setup_logging(level: str | None = None) -> None:
    global _CONFIGURED
    level_name = (level or settings.log_level).upper()
    resolved = getattr(logging, level_name, logging.WARNING)
    root = logging.getLogger()
    root.setLevel(resolved)

    # Avoid duplicate handlers if called twice
    if _CONFIGURED:
        for handler in root.handlers:
            handler.setLevel(resolved)
        return

    fmt = logging.Formatter(
        fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # stdout carries the report, so the console handler writes to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(fmt)
    console_handler.setLevel(resolved)
    root.addHandler(console_handler)

    if settings.log_file:
        file_handler = RotatingFileHandler(
            settings.log_file,
            maxBytes=settings.log_max_bytes,
            backupCount=settings.log_backup_count,
            encoding="utf-8",
        )
        file_handler.setFormatter(fmt)
        root.addHandler(file_handler)

    _CONFIGURED = True
