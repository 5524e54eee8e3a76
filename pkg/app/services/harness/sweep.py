from __future__ import annotations

import asyncio
import logging
from collections.abc import Iterator
from contextlib import ExitStack
from dataclasses import dataclass, field
from typing import Any, TextIO

from ..federation.metrics import METRIC_COMBINATIONS
from .config import Algorithm, ExperimentConfig, SelectionMode
from .runner import (
    Combination,
    CombinationResult,
    PreparedData,
    prepare,
    run_combination,
)
from .selection import Selection, SelectionError, manual_selection, select_model
from .settings import HarnessSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class ExperimentReport:
    config: ExperimentConfig
    # Ordered by (algorithm, r, k), one entry per grid point.
    results: tuple[CombinationResult, ...]
    participation: dict[str, Any]
    selections: dict[Algorithm, Selection] = field(default_factory=dict)
    # Rationale trace per algorithm whose curves offered nothing to select.
    selection_failures: dict[Algorithm, tuple[str, ...]] = field(default_factory=dict)

    def __iter__(self) -> Iterator[CombinationResult]:
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def for_algorithm(self, algorithm: Algorithm) -> list[CombinationResult]:
        return [result for result in self.results if result.algorithm is algorithm]

    def skipped(self) -> list[CombinationResult]:
        return [result for result in self.results if not result.completed]


def combinations(config: ExperimentConfig) -> list[Combination]:
    """Every grid point, ordered by algorithm, then r, then k."""
    ks = config.grid.k_values()
    combos = []
    for algorithm in config.algorithms:
        rounds: tuple[int | None, ...] = config.grid.rounds if algorithm.federated else (None,)
        for r in rounds:
            combos.extend(Combination(algorithm=algorithm, k=k, r=r) for k in ks)
    return combos


def _log_result(result: CombinationResult, index: int, total: int) -> None:
    r = "/" if result.r is None else result.r
    if not result.completed:
        logger.info(
            "[%d/%d] %s k=%d r=%s skipped: %s",
            index, total, result.algorithm.value, result.k, r, result.reason,
        )
        return
    silhouette = "n/a" if result.silhouette is None else f"{result.silhouette:.4f}"
    f1 = result.metrics.f1 if result.metrics else float("nan")
    logger.info(
        "[%d/%d] %s k=%d r=%s silhouette=%s f1=%.4f",
        index, total, result.algorithm.value, result.k, r, silhouette, f1,
    )


async def run_sweep(
    prepared: PreparedData,
    config: ExperimentConfig,
    *,
    workers: int = 1,
    trace_stream: TextIO | None = None,
) -> tuple[CombinationResult, ...]:
    """Evaluate the grid; results come back in grid order whatever the worker count."""
    combos = combinations(config)
    if trace_stream is not None and workers > 1:
        logger.warning("Protocol trace requested; running the sweep with one worker")
        workers = 1

    results: list[CombinationResult | None] = [None] * len(combos)
    done = 0

    def _record(index: int, result: CombinationResult) -> None:
        nonlocal done
        results[index] = result
        done += 1
        METRIC_COMBINATIONS.labels(status=result.status).inc()
        _log_result(result, done, len(combos))

    if workers == 1:
        for index, combo in enumerate(combos):
            _record(index, await run_combination(prepared, combo, config, trace_stream=trace_stream))
    else:
        semaphore = asyncio.Semaphore(workers)

        async def _worker(index: int, combo: Combination) -> None:
            async with semaphore:
                result = await asyncio.to_thread(
                    asyncio.run, run_combination(prepared, combo, config)
                )
            _record(index, result)

        await asyncio.gather(*(_worker(index, combo) for index, combo in enumerate(combos)))

    return tuple(result for result in results if result is not None)


def select_all(
    results: tuple[CombinationResult, ...], config: ExperimentConfig
) -> tuple[dict[Algorithm, Selection], dict[Algorithm, tuple[str, ...]]]:
    selections: dict[Algorithm, Selection] = {}
    failures: dict[Algorithm, tuple[str, ...]] = {}
    for algorithm in config.algorithms:
        try:
            if config.selection.mode is SelectionMode.MANUAL:
                assert config.selection.k is not None
                selections[algorithm] = manual_selection(
                    results, algorithm, config.selection.k, config.selection.r
                )
            else:
                selections[algorithm] = select_model(results, algorithm)
        except SelectionError as exc:
            logger.warning("%s", exc)
            failures[algorithm] = (*exc.trace, str(exc))
    return selections, failures


async def sweep_prepared_async(
    prepared: PreparedData,
    config: ExperimentConfig,
    settings: HarnessSettings | None = None,
) -> ExperimentReport:
    settings = settings or HarnessSettings.from_env()
    with ExitStack() as stack:
        trace_stream = None
        if settings.trace_path is not None:
            settings.trace_path.parent.mkdir(parents=True, exist_ok=True)
            trace_stream = stack.enter_context(settings.trace_path.open("w", encoding="utf-8"))
        results = await run_sweep(
            prepared, config, workers=settings.workers, trace_stream=trace_stream
        )
    selections, failures = select_all(results, config)
    return ExperimentReport(
        config=config,
        results=results,
        participation=prepared.participation(),
        selections=selections,
        selection_failures=failures,
    )


def sweep_prepared(
    prepared: PreparedData,
    config: ExperimentConfig,
    settings: HarnessSettings | None = None,
) -> ExperimentReport:
    return asyncio.run(sweep_prepared_async(prepared, config, settings))


def sweep(config: ExperimentConfig, settings: HarnessSettings | None = None) -> ExperimentReport:
    prepared = prepare(config)
    logger.info(
        "Sweeping %d combinations over %d clients",
        len(combinations(config)),
        prepared.federated.n_clients,
    )
    return sweep_prepared(prepared, config, settings)
