from __future__ import annotations

import json

import pandas as pd
import pytest

from app.services.harness.config import Algorithm, ExperimentConfig
from app.services.harness.reports import (
    F1_CURVES,
    MANIFEST,
    MODEL_NAMES,
    SILHOUETTE_CURVES,
    SUMMARY,
    ReportWriteError,
    emit_reports,
    read_report,
    write_report,
)
from app.services.harness.settings import HarnessSettings
from app.services.harness.sweep import sweep

SETTINGS = HarnessSettings(log_level="INFO", workers=1, trace_path=None, metrics_path=None)

CONFIG = {
    "synthetic": {"rows_per_blob": 30, "spread": 0.03, "seed": 5},
    "partition": {"scheme": "by-hash", "n_cap": 2},
    "grid": {"k_min": 2, "k_max": 5, "rounds": [0, 1]},
    "seeds": {"root": 3},
}


@pytest.fixture(scope="module")
def report():
    return sweep(ExperimentConfig.from_mapping(CONFIG), SETTINGS)


def test_emit_writes_four_files_with_exact_headers(report, tmp_path):
    written = emit_reports(report, tmp_path)

    assert [path.name for path in written] == [SILHOUETTE_CURVES, F1_CURVES, SUMMARY, MANIFEST]
    headers = {
        name: (tmp_path / name).read_text(encoding="utf-8").splitlines()[0]
        for name in (SILHOUETTE_CURVES, F1_CURVES, SUMMARY)
    }
    assert headers == {
        SILHOUETTE_CURVES: "algorithm,k,r,silhouette",
        F1_CURVES: "algorithm,k,r,f1",
        SUMMARY: "Model,Accuracy,Precision,Recall,F1,k,r",
    }


def test_curves_mark_centralized_rounds_with_a_slash(report, tmp_path):
    emit_reports(report, tmp_path)

    curves = pd.read_csv(tmp_path / SILHOUETTE_CURVES, dtype={"r": str})

    centralized = curves[curves["algorithm"] == Algorithm.CENTRALIZED.value]
    assert set(centralized["r"]) == {"/"}
    assert len(curves) == 4 + 8 + 8


def test_summary_lists_one_row_per_selected_model(report, tmp_path):
    emit_reports(report, tmp_path)

    summary = pd.read_csv(tmp_path / SUMMARY, dtype={"r": str})

    assert summary["Model"].iloc[0] == MODEL_NAMES[Algorithm.CENTRALIZED]
    assert set(summary["Model"]) <= set(MODEL_NAMES.values())
    assert len(summary) == len(report.selections)
    assert summary["F1"].between(0.0, 1.0).all()


def test_manifest_records_hash_and_seeds(report, tmp_path):
    emit_reports(report, tmp_path)

    manifest = json.loads((tmp_path / MANIFEST).read_text(encoding="utf-8"))

    assert manifest["config_hash"] == report.config.config_hash()
    assert manifest["seeds"]["root"] == 3
    assert len(manifest["seeds"]["combinations"]) == len(report)
    assert "numpy" in manifest["versions"]


def test_rerun_gives_byte_identical_csvs(report, tmp_path):
    emit_reports(report, tmp_path / "first")
    emit_reports(sweep(ExperimentConfig.from_mapping(CONFIG), SETTINGS), tmp_path / "second")

    for name in (SILHOUETTE_CURVES, F1_CURVES, SUMMARY):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_report_survives_a_json_round_trip(report, tmp_path):
    restored = read_report(write_report(report, tmp_path))

    assert len(restored) == len(report)
    assert restored.config == report.config
    assert restored.selections == report.selections
    assert [r.metrics for r in restored] == [r.metrics for r in report]


def test_io_failures_carry_the_path(report, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")

    with pytest.raises(ReportWriteError) as excinfo:
        emit_reports(report, blocker / "out")
    assert excinfo.value.path == blocker / "out"

    with pytest.raises(ReportWriteError):
        read_report(blocker)
