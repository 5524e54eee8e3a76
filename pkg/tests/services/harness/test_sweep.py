from __future__ import annotations

import asyncio
import io

import pytest

from app.services.harness.config import Algorithm, ExperimentConfig
from app.services.harness.runner import (
    Combination,
    aggregation_gaps,
    prepare,
    run_combination,
)
from app.services.harness.settings import HarnessSettings
from app.services.harness.sweep import combinations, run_sweep, sweep

SETTINGS = HarnessSettings(log_level="INFO", workers=1, trace_path=None, metrics_path=None)

SYNTHETIC = {
    "synthetic": {"rows_per_blob": 50, "spread": 0.03, "seed": 0},
    "partition": {"scheme": "by-hash", "n_cap": 3},
    "grid": {"k_min": 2, "k_max": 8, "rounds": [0, 2]},
    "seeds": {"root": 7},
}


@pytest.fixture(scope="module")
def report():
    return sweep(ExperimentConfig.from_mapping(SYNTHETIC), SETTINGS)


def test_grid_order_and_size():
    config = ExperimentConfig.from_mapping(SYNTHETIC)

    combos = combinations(config)

    assert len(combos) == 7 + 14 + 14
    assert combos[0] == Combination(Algorithm.CENTRALIZED, 2, None)
    assert combos[7] == Combination(Algorithm.GARST_REINDERS, 2, 0)
    assert combos[14] == Combination(Algorithm.GARST_REINDERS, 2, 2)


def test_combination_seeds_are_stable_and_distinct():
    first = Combination(Algorithm.FED_KMEANS_FED_INIT, 3, 0)
    second = Combination(Algorithm.FED_KMEANS_FED_INIT, 3, 2)

    assert first.seed(7) == first.seed(7)
    assert first.seed(7) != second.seed(7)
    assert first.seed(7) != first.seed(8)


def test_three_blob_sweep_completes_every_combination(report):
    fed = report.for_algorithm(Algorithm.FED_KMEANS_FED_INIT)

    assert len(fed) == 14
    assert report.skipped() == []
    assert report.participation["n_clients"] == 3


def test_centralized_silhouette_peaks_at_three(report):
    curve = [
        (r.silhouette, r.k)
        for r in report.for_algorithm(Algorithm.CENTRALIZED)
        if r.silhouette is not None
    ]

    assert len(curve) == 7
    assert max(curve)[1] == 3
    assert report.selections[Algorithm.CENTRALIZED].k == 3


def test_selected_centralized_model_separates_benign_traffic(report):
    result = next(r for r in report.for_algorithm(Algorithm.CENTRALIZED) if r.k == 3)

    assert result.metrics is not None
    assert result.metrics.f1 >= 0.95
    assert result.metrics.accuracy >= 0.95


@pytest.mark.parametrize(
    "algorithm",
    [Algorithm.CENTRALIZED, Algorithm.GARST_REINDERS, Algorithm.FED_KMEANS_FED_INIT],
)
def test_every_algorithm_selects_three_clusters_and_detects_attacks(report, algorithm):
    selection = report.selections[algorithm]
    result = next(
        r for r in report.for_algorithm(algorithm) if r.k == selection.k and r.r == selection.r
    )

    assert selection.k == 3
    assert result.metrics is not None
    assert result.metrics.f1 >= 0.95


def test_privacy_ledger_per_algorithm(report):
    for result in report.for_algorithm(Algorithm.FED_KMEANS_FED_INIT):
        assert result.ledger["raw_points"] == result.k
        assert len(result.potentials) == result.r + 1
        assert len(result.aggregation_gap) == result.r
    for result in report.for_algorithm(Algorithm.GARST_REINDERS):
        assert result.ledger["raw_points"] == 3 * result.k


def test_centralized_rows_have_no_rounds_or_ledger(report):
    for result in report.for_algorithm(Algorithm.CENTRALIZED):
        assert result.r is None
        assert result.ledger == {}


def test_k_above_the_pooled_rows_is_skipped():
    config = ExperimentConfig.from_mapping(
        {
            **SYNTHETIC,
            "synthetic": {"rows_per_blob": 2, "seed": 0},
            "grid": {"k_min": 2, "k_max": 6, "rounds": [0]},
        }
    )

    result = sweep(config, SETTINGS)

    train_rows = result.participation["train_rows"]
    for item in result:
        assert item.completed == (item.k <= train_rows), item
    assert {item.reason is not None for item in result.skipped()} == {True}


def test_aggregation_gap_is_zero_for_a_single_client():
    config = ExperimentConfig.from_mapping(
        {**SYNTHETIC, "partition": {"scheme": "by-hash", "n_cap": 1}}
    )
    prepared = prepare(config)
    combo = Combination(Algorithm.FED_KMEANS_FED_INIT, 3, 2)

    result = asyncio.run(run_combination(prepared, combo, config))

    assert len(result.aggregation_gap) == 2
    assert max(result.aggregation_gap) < 1e-9
    assert aggregation_gaps(prepared.train, ()) == ()


async def test_trace_covers_every_federated_message():
    config = ExperimentConfig.from_mapping(
        {
            **SYNTHETIC,
            "algorithms": ["fed-kmeans-fed-init"],
            "grid": {"k_min": 2, "k_max": 3, "rounds": [1]},
        }
    )
    prepared = prepare(config)
    stream = io.StringIO()

    results = await run_sweep(prepared, config, workers=4, trace_stream=stream)

    lines = stream.getvalue().splitlines()
    assert len(results) == 2
    assert lines
    assert all('"run": "fed-kmeans-fed-init k=' in line for line in lines)


async def test_parallel_workers_match_sequential_results():
    config = ExperimentConfig.from_mapping(
        {**SYNTHETIC, "grid": {"k_min": 2, "k_max": 4, "rounds": [1]}}
    )
    prepared = prepare(config)

    sequential = await run_sweep(prepared, config, workers=1)
    parallel = await run_sweep(prepared, config, workers=3)

    assert [(r.algorithm, r.k, r.r, r.silhouette) for r in sequential] == [
        (r.algorithm, r.k, r.r, r.silhouette) for r in parallel
    ]
