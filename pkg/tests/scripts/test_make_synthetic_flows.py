from __future__ import annotations

import json
import sys

import pandas as pd

from app.services.harness.config import ExperimentConfig
from scripts.make_synthetic_flows import experiment_config, main


def test_script_writes_csv_and_loadable_config(tmp_path, monkeypatch, capsys):
    csv_path = tmp_path / "data" / "blobs.csv"
    config_path = tmp_path / "configs" / "blobs.yaml"
    monkeypatch.setattr(
        sys,
        "argv",
        [
            "make_synthetic_flows.py",
            "--out",
            str(csv_path),
            "--config-out",
            str(config_path),
            "--rows-per-blob",
            "4",
        ],
    )

    assert main() == 0

    summary = json.loads(capsys.readouterr().out)
    assert summary == {"ok": True, "csv": str(csv_path), "rows": 12, "config": str(config_path)}
    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == ["f0", "f1", "label", "attack_cat", "dst_ip"]
    config = ExperimentConfig.load(config_path)
    assert config.dataset_path is not None
    assert config.dataset_path.resolve() == csv_path.resolve()
    assert config.dataset.key_column == "dst_ip"


def test_config_falls_back_to_an_absolute_dataset_path(tmp_path):
    csv_path = tmp_path / "a" / "flows.csv"

    data = experiment_config(csv_path, tmp_path / "b" / "exp.yaml", seed=3)

    assert data["dataset_path"] == str(csv_path.resolve())
    assert data["seeds"] == {"root": 3}
