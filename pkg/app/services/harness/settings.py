from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True, slots=True)
class HarnessSettings:
    log_level: str
    workers: int
    trace_path: Path | None
    metrics_path: Path | None

    @classmethod
    def from_env(cls) -> "HarnessSettings":
        return cls(
            log_level=(_env_optional_str("LOG_LEVEL") or "INFO").upper(),
            workers=max(1, _env_int("FEDKMEANS_WORKERS", 1)),
            trace_path=_env_optional_path("FEDKMEANS_TRACE_PATH"),
            metrics_path=_env_optional_path("FEDKMEANS_METRICS_PATH"),
        )


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


def _env_optional_str(name: str) -> str | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    return raw.strip()


def _env_optional_path(name: str) -> Path | None:
    raw = _env_optional_str(name)
    return Path(raw) if raw else None
