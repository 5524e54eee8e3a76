from __future__ import annotations

import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any

import pandas as pd

from ...utils.version import get_version, runtime_versions
from ..classifier import MetricsReport
from .config import Algorithm, ExperimentConfig, SelectionMode
from .runner import CombinationResult
from .selection import Selection
from .sweep import ExperimentReport

logger = logging.getLogger(__name__)

SILHOUETTE_CURVES = "silhouette_curves.csv"
F1_CURVES = "f1_curves.csv"
SUMMARY = "summary.csv"
MANIFEST = "run_manifest.json"
REPORT = "report.json"

FLOAT_FORMAT = "%.6f"
NO_ROUNDS = "/"

MODEL_NAMES = {
    Algorithm.CENTRALIZED: "K-means",
    Algorithm.GARST_REINDERS: "Federated K-means + local K-means++ init",
    Algorithm.FED_KMEANS_FED_INIT: "Federated K-means + federated K-means++ init",
}


class ReportWriteError(RuntimeError):
    """Raised when a report file cannot be written or read back."""

    def __init__(self, path: Path, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = path


def _rounds(r: int | None) -> str:
    return NO_ROUNDS if r is None else str(r)


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc
    return path


def _write_json(data: dict[str, Any], path: Path) -> Path:
    try:
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportWriteError(path, exc.strerror or str(exc)) from exc
    return path


def curve_frame(report: ExperimentReport, column: str) -> pd.DataFrame:
    """One row per completed grid point: algorithm, k, r and ``column``."""
    rows = []
    for result in report:
        if not result.completed:
            continue
        if column == "silhouette":
            value = result.silhouette
        else:
            value = result.metrics.f1 if result.metrics else None
        rows.append(
            {"algorithm": result.algorithm.value, "k": result.k, "r": _rounds(result.r), column: value}
        )
    return pd.DataFrame(rows, columns=["algorithm", "k", "r", column])


def summary_frame(report: ExperimentReport) -> pd.DataFrame:
    rows = []
    for algorithm in report.config.algorithms:
        selection = report.selections.get(algorithm)
        if selection is None:
            continue
        result = next(
            item
            for item in report.for_algorithm(algorithm)
            if (item.k, item.r) == (selection.k, selection.r)
        )
        assert result.metrics is not None
        rows.append(
            {
                "Model": MODEL_NAMES[algorithm],
                "Accuracy": result.metrics.accuracy,
                "Precision": result.metrics.precision,
                "Recall": result.metrics.recall,
                "F1": result.metrics.f1,
                "k": selection.k,
                "r": _rounds(selection.r),
            }
        )
    return pd.DataFrame(rows, columns=["Model", "Accuracy", "Precision", "Recall", "F1", "k", "r"])


def manifest(report: ExperimentReport) -> dict[str, Any]:
    config = report.config
    return {
        "version": get_version(),
        "config_hash": config.config_hash(),
        "seeds": {
            "root": config.seeds.root,
            "split": config.seeds.split_seed,
            "combinations": {
                f"{result.algorithm.value}|{result.k}|{_rounds(result.r)}": result.seed
                for result in report
            },
        },
        "versions": runtime_versions(),
        "participation": report.participation,
        "combinations": len(report),
        "skipped": len(report.skipped()),
        "selections": {
            algorithm.value: {"k": s.k, "r": _rounds(s.r), "mode": s.mode.value, "trace": list(s.trace)}
            for algorithm, s in report.selections.items()
        },
        "selection_failures": {
            algorithm.value: list(trace) for algorithm, trace in report.selection_failures.items()
        },
    }


def emit_reports(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Write both curve CSVs, the summary table and the run manifest."""
    target = Path(out_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportWriteError(target, exc.strerror or str(exc)) from exc
    written = [
        _write_csv(curve_frame(report, "silhouette"), target / SILHOUETTE_CURVES),
        _write_csv(curve_frame(report, "f1"), target / F1_CURVES),
        _write_csv(summary_frame(report), target / SUMMARY),
        _write_json(manifest(report), target / MANIFEST),
    ]
    logger.info("Wrote %d report files to %s", len(written), target)
    return written


def _result_to_dict(result: CombinationResult) -> dict[str, Any]:
    data = asdict(result)
    data["algorithm"] = result.algorithm.value
    return data


def _result_from_dict(data: dict[str, Any]) -> CombinationResult:
    metrics = data.get("metrics")
    return CombinationResult(
        algorithm=Algorithm(data["algorithm"]),
        k=int(data["k"]),
        r=data["r"],
        seed=int(data["seed"]),
        status=data["status"],
        reason=data.get("reason"),
        k_effective=data.get("k_effective"),
        silhouette=data.get("silhouette"),
        metrics=MetricsReport(**metrics) if metrics else None,
        ledger=data.get("ledger") or {},
        potentials=tuple(data.get("potentials") or ()),
        aggregation_gap=tuple(data.get("aggregation_gap") or ()),
        wall_clock=float(data.get("wall_clock", 0.0)),
    )


def _selection_to_dict(selection: Selection) -> dict[str, Any]:
    data = asdict(selection)
    data["algorithm"] = selection.algorithm.value
    data["mode"] = selection.mode.value
    return data


def _selection_from_dict(data: dict[str, Any]) -> Selection:
    return Selection(
        algorithm=Algorithm(data["algorithm"]),
        k=int(data["k"]),
        r=data["r"],
        score=data["score"],
        mode=SelectionMode(data["mode"]),
        candidates=tuple((int(k), float(value)) for k, value in data["candidates"]),
        trace=tuple(data["trace"]),
    )


def report_to_dict(report: ExperimentReport) -> dict[str, Any]:
    return {
        "config": report.config.model_dump(mode="json"),
        "participation": report.participation,
        "results": [_result_to_dict(result) for result in report],
        "selections": [_selection_to_dict(s) for s in report.selections.values()],
        "selection_failures": {
            algorithm.value: list(trace) for algorithm, trace in report.selection_failures.items()
        },
    }


def report_from_dict(data: dict[str, Any]) -> ExperimentReport:
    selections = [_selection_from_dict(item) for item in data.get("selections", [])]
    return ExperimentReport(
        config=ExperimentConfig.from_mapping(data["config"]),
        results=tuple(_result_from_dict(item) for item in data["results"]),
        participation=data.get("participation", {}),
        selections={selection.algorithm: selection for selection in selections},
        selection_failures={
            Algorithm(name): tuple(trace)
            for name, trace in data.get("selection_failures", {}).items()
        },
    )


def write_report(report: ExperimentReport, out_dir: str | Path) -> Path:
    target = Path(out_dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportWriteError(target, exc.strerror or str(exc)) from exc
    return _write_json(report_to_dict(report), target / REPORT)


def read_report(path: str | Path) -> ExperimentReport:
    source = Path(path)
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportWriteError(source, exc.strerror or str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ReportWriteError(source, f"not a report: {exc}") from exc
    return report_from_dict(data)
