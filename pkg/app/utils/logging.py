from __future__ import annotations

import logging
import os

TRACE_LEVEL = 5
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def ensure_trace_level() -> None:
    """Register the TRACE level (below DEBUG) used for per-message protocol logging."""
    if logging.getLevelName(TRACE_LEVEL) == "TRACE":
        return
    logging.addLevelName(TRACE_LEVEL, "TRACE")


def resolve_level(name: str | None) -> int:
    ensure_trace_level()
    level_name = (name or "INFO").strip().upper()
    level = logging.getLevelName(level_name)
    return level if isinstance(level, int) else logging.INFO


def setup_logging(level_name: str | None = None) -> None:
    level = resolve_level(level_name if level_name is not None else os.getenv("LOG_LEVEL"))
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
