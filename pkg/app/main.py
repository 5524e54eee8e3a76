"""Command-line driver: preprocess, sweep, select and report.

    python -m app.main sweep --config configs/synthetic.yaml --out out
    python -m app.main select --out out
    python -m app.main report --out out
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

from .services.dataset.loader import MalformedInputError, SchemaError, dump_dataset
from .services.dataset.partition import PartitionConfigError
from .services.dataset.preprocess import EmptyDatasetError
from .services.federation.metrics import write_metrics
from .services.harness.config import Algorithm, ConfigError, ExperimentConfig
from .services.harness.reports import (
    REPORT,
    ReportWriteError,
    emit_reports,
    read_report,
    write_report,
)
from .services.harness.runner import prepare
from .services.harness.selection import Selection, SelectionError, manual_selection, select_model
from .services.harness.settings import HarnessSettings
from .services.harness.sweep import ExperimentReport, sweep
from .utils.logging import setup_logging
from .utils.version import get_version

logger = logging.getLogger("app")

EXIT_USAGE = 2

DOMAIN_ERRORS = (
    ConfigError,
    SchemaError,
    MalformedInputError,
    EmptyDatasetError,
    PartitionConfigError,
    SelectionError,
    ReportWriteError,
)


def _rounds(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from exc


def _algorithms(raw: str) -> tuple[Algorithm, ...]:
    try:
        return tuple(Algorithm(part.strip()) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        choices = ", ".join(algorithm.value for algorithm in Algorithm)
        raise argparse.ArgumentTypeError(f"unknown algorithm in {raw!r}; choose from {choices}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedkmeans", description="Federated K-means intrusion detection experiments"
    )
    parser.add_argument("--version", action="version", version=get_version())
    commands = parser.add_subparsers(dest="command", required=True)

    def _experiment(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", type=Path, required=True, help="experiment YAML file")
        sub.add_argument("--seed", type=int, help="root seed")
        sub.add_argument("--out", type=Path, help="output directory")

    preprocess = commands.add_parser("preprocess", help="preprocess, split and partition")
    _experiment(preprocess)

    sweep_cmd = commands.add_parser("sweep", help="train and evaluate every (algorithm, k, r)")
    _experiment(sweep_cmd)
    sweep_cmd.add_argument("--algo", type=_algorithms, help="comma-separated algorithms")
    sweep_cmd.add_argument("--k-min", type=int)
    sweep_cmd.add_argument("--k-max", type=int)
    sweep_cmd.add_argument("--k-stride", type=int)
    sweep_cmd.add_argument("--rounds", type=_rounds, help="comma-separated r values")

    for name, help_text in (
        ("select", "pick (r*, k*) from a sweep report"),
        ("report", "write curve, summary and manifest files"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--out", type=Path, default=Path("out"), help="sweep output directory")
        sub.add_argument("--report", type=Path, help=f"report file, default <out>/{REPORT}")
        sub.add_argument("--algo", type=_algorithms, help="restrict to these algorithms")
        sub.add_argument("--k", type=int, help="manual k (with --r for federated algorithms)")
        sub.add_argument("--r", type=int, help="manual r")
    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.load(args.config)
    return config.with_overrides(
        seed=args.seed,
        output_dir=args.out,
        algorithms=getattr(args, "algo", None),
        k_min=getattr(args, "k_min", None),
        k_max=getattr(args, "k_max", None),
        k_stride=getattr(args, "k_stride", None),
        rounds=getattr(args, "rounds", None),
    )


def _cmd_preprocess(args: argparse.Namespace, settings: HarnessSettings) -> int:
    config = _load_config(args)
    prepared = prepare(config)
    out = config.output_dir
    dump_dataset(prepared.train, out / "train.csv")
    dump_dataset(prepared.test, out / "test.csv")
    for index, shard in enumerate(prepared.federated.shards):
        dump_dataset(shard, out / "shards" / f"client-{index}.csv")
    participation = prepared.participation()
    (out / "participation.json").write_text(
        json.dumps(participation, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(json.dumps(participation, ensure_ascii=False))
    return 0


def _cmd_sweep(args: argparse.Namespace, settings: HarnessSettings) -> int:
    config = _load_config(args)
    report = sweep(config, settings)
    path = write_report(report, config.output_dir)
    print(
        json.dumps(
            {
                "report": str(path),
                "combinations": len(report),
                "skipped": len(report.skipped()),
                "selected": {
                    algorithm.value: {"k": s.k, "r": s.r}
                    for algorithm, s in report.selections.items()
                },
            }
        )
    )
    return 0


def _selections(args: argparse.Namespace, report: ExperimentReport) -> dict[Algorithm, Selection]:
    algorithms = args.algo or report.config.algorithms
    selections = {}
    for algorithm in algorithms:
        if args.k is not None:
            selections[algorithm] = manual_selection(report, algorithm, args.k, args.r)
        else:
            selections[algorithm] = select_model(report, algorithm)
    return selections


def _cmd_select(args: argparse.Namespace, settings: HarnessSettings) -> int:
    report = read_report(args.report or args.out / REPORT)
    for algorithm, selection in _selections(args, report).items():
        print(
            json.dumps(
                {
                    "algorithm": algorithm.value,
                    "k": selection.k,
                    "r": selection.r,
                    "silhouette": selection.score,
                    "mode": selection.mode.value,
                    "trace": list(selection.trace),
                }
            )
        )
    return 0


def _cmd_report(args: argparse.Namespace, settings: HarnessSettings) -> int:
    report = read_report(args.report or args.out / REPORT)
    if args.k is not None or args.algo is not None:
        report = replace(report, selections=_selections(args, report), selection_failures={})
    for path in emit_reports(report, args.out):
        print(path)
    return 0


COMMANDS = {
    "preprocess": _cmd_preprocess,
    "sweep": _cmd_sweep,
    "select": _cmd_select,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = HarnessSettings.from_env()
    setup_logging(settings.log_level)
    try:
        return COMMANDS[args.command](args, settings)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if settings.metrics_path is not None:
            write_metrics(settings.metrics_path)


if __name__ == "__main__":
    raise SystemExit(main())
