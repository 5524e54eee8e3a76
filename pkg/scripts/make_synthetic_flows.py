#!/usr/bin/env python
"""Write Gaussian-blob flow records as CSV plus a matching experiment config.

    python scripts/make_synthetic_flows.py --out data/blobs.csv --config-out configs/blobs.yaml
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from app.services.harness.config import ExperimentConfig, SyntheticConfig  # noqa: E402
from app.services.harness.synthetic import make_blobs  # noqa: E402


def write_flows(out: Path, config: SyntheticConfig) -> int:
    frame = make_blobs(config)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format="%.6f", lineterminator="\n")
    return len(frame)


def experiment_config(csv_path: Path, config_path: Path, *, seed: int) -> dict[str, object]:
    try:
        relative = csv_path.resolve().relative_to(config_path.resolve().parent)
        dataset_path = str(relative)
    except ValueError:
        dataset_path = str(csv_path.resolve())
    data: dict[str, object] = {
        "dataset_path": dataset_path,
        "dataset": {"label_column": "label", "benign_value": "0", "class_column": "attack_cat",
                    "key_column": "dst_ip"},
        "partition": {"scheme": "by-hash", "n_cap": 3},
        "grid": {"k_min": 2, "k_max": 8, "rounds": [0, 2]},
        "seeds": {"root": seed},
    }
    # Validate before writing so the file always loads.
    ExperimentConfig.from_mapping({**data, "dataset_path": str(csv_path)})
    return data


def main() -> int:
    parser = argparse.ArgumentParser(description="Generate synthetic flow records")
    parser.add_argument("--out", type=Path, required=True, help="CSV file to write")
    parser.add_argument("--config-out", type=Path, help="experiment YAML to write next to it")
    parser.add_argument("--rows-per-blob", type=int, default=50)
    parser.add_argument("--spread", type=float, default=0.03)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    synthetic = SyntheticConfig(rows_per_blob=args.rows_per_blob, spread=args.spread, seed=args.seed)
    rows = write_flows(args.out, synthetic)
    summary: dict[str, object] = {"ok": True, "csv": str(args.out), "rows": rows}
    if args.config_out is not None:
        args.config_out.parent.mkdir(parents=True, exist_ok=True)
        data = experiment_config(args.out, args.config_out, seed=args.seed)
        args.config_out.write_text(yaml.safe_dump(data, sort_keys=False), encoding="utf-8")
        summary["config"] = str(args.config_out)
    print(json.dumps(summary, ensure_ascii=False))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
