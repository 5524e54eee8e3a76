from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, TextIO

from ...utils.seeding import derive_seed
from ..classifier import MetricsReport, VoteTable, aggregate_votes, client_vote, predict, score
from ..dataset.loader import load_csv
from ..dataset.partition import partition_federated
from ..dataset.preprocess import preprocess
from ..dataset.split import split_train_test
from ..dataset.types import Dataset, FederatedDataset, RawTable
from ..federation.client import local_lloyd_step
from ..federation.metrics import observe_message
from ..federation.protocol import Federation, run_federated_kmeans
from ..federation.server import ProtocolError
from ..federation.trace import ProtocolTrace
from ..federation.types import InitStrategy
from ..kmeans.distance import centroid_set_gap
from ..kmeans.lloyd import fit_kmeans
from ..kmeans.types import CentroidSet, InfeasibleClusteringError
from ..silhouette import client_mean_silhouette, federated_silhouette
from .config import Algorithm, ConfigError, ExperimentConfig
from .synthetic import synthetic_table

logger = logging.getLogger(__name__)

COMPLETED = "completed"
SKIPPED = "skipped"

_INIT = {
    Algorithm.GARST_REINDERS: InitStrategy.LOCAL,
    Algorithm.FED_KMEANS_FED_INIT: InitStrategy.FEDERATED,
}


@dataclass(frozen=True, slots=True, eq=False)
class PreparedData:
    train: Dataset
    test: Dataset
    federated: FederatedDataset

    def participation(self) -> dict[str, Any]:
        federated = self.federated
        return {
            "n_clients": federated.n_clients,
            "scheme": federated.scheme.value,
            "shard_names": list(federated.shard_names),
            "shard_sizes": federated.sizes,
            "single_class_clients": federated.single_class_clients(),
            "train_rows": self.train.n_rows,
            "test_rows": self.test.n_rows,
        }


@dataclass(frozen=True, slots=True)
class Combination:
    algorithm: Algorithm
    k: int
    # None for the centralized model, which has no rounds.
    r: int | None

    def seed(self, root: int) -> int:
        return derive_seed(root, self.algorithm.value, self.k, "/" if self.r is None else self.r)

    @property
    def label(self) -> str:
        return f"{self.algorithm.value} k={self.k} r={'/' if self.r is None else self.r}"


@dataclass(frozen=True, slots=True)
class CombinationResult:
    algorithm: Algorithm
    k: int
    r: int | None
    seed: int
    status: str
    reason: str | None = None
    k_effective: int | None = None
    silhouette: float | None = None
    metrics: MetricsReport | None = None
    ledger: dict[str, Any] = field(default_factory=dict)
    potentials: tuple[float, ...] = ()
    aggregation_gap: tuple[float, ...] = ()
    wall_clock: float = 0.0

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED


def load_table(config: ExperimentConfig) -> RawTable:
    if config.synthetic is not None:
        return synthetic_table(config.synthetic)
    assert config.dataset_path is not None
    return load_csv(config.dataset_path, config.dataset)


def prepare(config: ExperimentConfig, table: RawTable | None = None) -> PreparedData:
    """Load, preprocess, split and partition the configured dataset."""
    dataset = preprocess(table or load_table(config), config.selection_threshold)
    if not dataset.is_labeled:
        raise ConfigError("experiments need a label column to score the classifier")
    train, test = split_train_test(dataset, config.train_fraction, config.seeds.split_seed)
    federated = partition_federated(
        train,
        config.partition.scheme,
        n_cap=config.partition.n_cap,
        min_shard_rows=config.partition.min_shard_rows,
    )
    return PreparedData(train=train, test=test, federated=federated)


def _federated_silhouette_direct(
    shards: tuple[Dataset, ...], centroids: CentroidSet, config: ExperimentConfig
) -> float | None:
    if centroids.k < 2:
        return None
    reports = [client_mean_silhouette(shard, centroids, config.metric) for shard in shards]
    return federated_silhouette(reports)


def _evaluate(test: Dataset, centroids: CentroidSet, votes: VoteTable) -> MetricsReport:
    assert test.labels is not None
    return score(predict(test, centroids, votes), test.labels)


def aggregation_gaps(pooled: Dataset, history: tuple[CentroidSet, ...]) -> tuple[float, ...]:
    """Per round, distance from the federated model to one pooled Lloyd step on its input."""
    gaps = []
    for before, after in zip(history, history[1:]):
        means, _ = local_lloyd_step(pooled, before)
        gaps.append(centroid_set_gap(CentroidSet(means), after))
    return tuple(gaps)


def run_centralized(
    prepared: PreparedData, combo: Combination, config: ExperimentConfig
) -> CombinationResult:
    seed = combo.seed(config.seeds.root)
    started = time.perf_counter()
    run = fit_kmeans(
        prepared.train,
        combo.k,
        seed,
        max_iters=config.max_iters,
        tolerance=config.tolerance,
    )
    centroids = run.centroids
    shards = prepared.federated.shards
    if config.vote_on == "train":
        votes = aggregate_votes([client_vote(shard, centroids) for shard in shards])
    else:
        votes = aggregate_votes([client_vote(prepared.test, centroids)])
    return CombinationResult(
        algorithm=combo.algorithm,
        k=combo.k,
        r=None,
        seed=seed,
        status=COMPLETED,
        k_effective=centroids.k,
        silhouette=_federated_silhouette_direct(shards, centroids, config),
        metrics=_evaluate(prepared.test, centroids, votes),
        potentials=(run.inertia_history[-1],),
        wall_clock=time.perf_counter() - started,
    )


async def run_federated(
    prepared: PreparedData,
    combo: Combination,
    config: ExperimentConfig,
    *,
    trace_stream: TextIO | None = None,
) -> CombinationResult:
    assert combo.r is not None
    seed = combo.seed(config.seeds.root)
    started = time.perf_counter()
    federation = Federation.from_shards(prepared.federated, seed=seed, listeners=[observe_message])
    if trace_stream is not None:
        federation.transport.subscribe(
            ProtocolTrace(trace_stream, federation.ledger, run=combo.label)
        )
    async with federation:
        run = await run_federated_kmeans(federation, combo.k, combo.r, init=_INIT[combo.algorithm])
        centroids = run.centroids
        silhouette = None
        if centroids.k >= 2:
            silhouette = (await federation.server.silhouette(centroids, config.metric)).score
        if config.vote_on == "train":
            votes = await federation.server.votes(centroids)
        else:
            votes = aggregate_votes([client_vote(prepared.test, centroids)])

    ledger = federation.ledger
    if ledger.total_incidental:
        logger.warning(
            "%s: %d local centroids were single raw points",
            combo.label,
            ledger.total_incidental,
        )
    return CombinationResult(
        algorithm=combo.algorithm,
        k=combo.k,
        r=combo.r,
        seed=seed,
        status=COMPLETED,
        k_effective=centroids.k,
        silhouette=silhouette,
        metrics=_evaluate(prepared.test, centroids, votes),
        ledger=ledger.summary(),
        potentials=run.potentials,
        aggregation_gap=aggregation_gaps(prepared.train, run.history),
        wall_clock=time.perf_counter() - started,
    )


async def run_combination(
    prepared: PreparedData,
    combo: Combination,
    config: ExperimentConfig,
    *,
    trace_stream: TextIO | None = None,
) -> CombinationResult:
    """Train and evaluate one grid point; infeasible or failed runs come back as skipped."""
    try:
        if combo.algorithm is Algorithm.CENTRALIZED:
            return run_centralized(prepared, combo, config)
        return await run_federated(prepared, combo, config, trace_stream=trace_stream)
    except (InfeasibleClusteringError, ProtocolError) as exc:
        return CombinationResult(
            algorithm=combo.algorithm,
            k=combo.k,
            r=combo.r,
            seed=combo.seed(config.seeds.root),
            status=SKIPPED,
            reason=str(exc),
        )
