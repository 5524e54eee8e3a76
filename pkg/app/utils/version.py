from __future__ import annotations

import platform
import tomllib
from functools import lru_cache
from importlib import metadata
from pathlib import Path

_PYPROJECT = Path(__file__).resolve().parents[2] / "pyproject.toml"

# Third-party packages whose versions influence numeric results.
_TRACKED_PACKAGES = ("numpy", "pandas", "scipy", "pydantic", "PyYAML")


@lru_cache(maxsize=1)
def get_version() -> str:
    with _PYPROJECT.open("rb") as fh:
        data = tomllib.load(fh)
    project = data.get("project") or {}
    return str(project.get("version") or "0.0.0")


def runtime_versions() -> dict[str, str]:
    versions = {"fedkmeans-ids": get_version(), "python": platform.python_version()}
    for package in _TRACKED_PACKAGES:
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "missing"
    return versions
