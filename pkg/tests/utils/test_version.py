from __future__ import annotations

import re

from app.utils.version import get_version, runtime_versions


def test_version_is_calver():
    assert re.fullmatch(r"\d{4}\.\d{2}\.\d{2}\.\d+", get_version())


def test_runtime_versions_cover_numeric_stack():
    versions = runtime_versions()

    assert versions["fedkmeans-ids"] == get_version()
    assert {"python", "numpy", "pandas", "scipy", "pydantic", "PyYAML"} <= set(versions)
