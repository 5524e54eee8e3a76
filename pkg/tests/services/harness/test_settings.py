from __future__ import annotations

from pathlib import Path

import pytest

from app.services.harness.settings import HarnessSettings


def test_settings_defaults(monkeypatch):
    for name in ("LOG_LEVEL", "FEDKMEANS_WORKERS", "FEDKMEANS_TRACE_PATH", "FEDKMEANS_METRICS_PATH"):
        monkeypatch.delenv(name, raising=False)

    settings = HarnessSettings.from_env()

    assert settings == HarnessSettings(log_level="INFO", workers=1, trace_path=None, metrics_path=None)


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "debug")
    monkeypatch.setenv("FEDKMEANS_WORKERS", "4")
    monkeypatch.setenv("FEDKMEANS_TRACE_PATH", "out/trace.ndjson")
    monkeypatch.setenv("FEDKMEANS_METRICS_PATH", " ")

    settings = HarnessSettings.from_env()

    assert settings.log_level == "DEBUG"
    assert settings.workers == 4
    assert settings.trace_path == Path("out/trace.ndjson")
    assert settings.metrics_path is None


@pytest.mark.parametrize(("raw", "expected"), [("0", 1), ("-3", 1), ("", 1), ("2", 2)])
def test_workers_are_at_least_one(monkeypatch, raw, expected):
    monkeypatch.setenv("FEDKMEANS_WORKERS", raw)

    assert HarnessSettings.from_env().workers == expected


def test_workers_must_be_an_integer(monkeypatch):
    monkeypatch.setenv("FEDKMEANS_WORKERS", "many")

    with pytest.raises(ValueError):
        HarnessSettings.from_env()
