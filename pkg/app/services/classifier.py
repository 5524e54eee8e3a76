"""Cluster-vote intrusion classifier.

Clients report, per cluster, the share of benign flows among their members and
the member count. The server pools these into one benign proportion per cluster
and labels the cluster benign only when that proportion is strictly above 0.5.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dataset.types import Dataset, Label
from .kmeans.distance import nearest_many
from .kmeans.types import CentroidSet, DimensionMismatchError

logger = logging.getLogger(__name__)

BENIGN_THRESHOLD = 0.5


class UnlabeledShardError(ValueError):
    """Raised when a shard without labels is asked to vote."""


class LengthMismatchError(ValueError):
    """Raised when predictions and ground truth differ in length."""


@dataclass(frozen=True, slots=True)
class ClusterVote:
    benign_fraction: float | None
    size: int


@dataclass(frozen=True, slots=True, eq=False)
class VoteTable:
    # (k, n_clients): benign share and member count per cluster and client; NaN where size is 0.
    proportions: np.ndarray
    sizes: np.ndarray
    # Pooled benign proportion per cluster; NaN for clusters no client populated.
    pooled: np.ndarray
    labels: np.ndarray

    @property
    def k(self) -> int:
        return int(self.labels.size)


@dataclass(frozen=True, slots=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    degenerate: bool = False

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def client_vote(shard: Dataset, centroids: CentroidSet) -> list[ClusterVote]:
    if shard.labels is None:
        raise UnlabeledShardError("voting needs a labeled shard")
    indices, _ = nearest_many(shard, centroids)
    votes = []
    for cluster in range(centroids.k):
        members = shard.labels[indices == cluster]
        if members.size == 0:
            votes.append(ClusterVote(benign_fraction=None, size=0))
            continue
        benign = int((members == Label.BENIGN).sum())
        votes.append(ClusterVote(benign_fraction=benign / members.size, size=int(members.size)))
    return votes


def aggregate_votes(tables: Sequence[Sequence[ClusterVote]]) -> VoteTable:
    if not tables:
        raise ValueError("at least one client vote table is required")
    k = len(tables[0])
    if any(len(table) != k for table in tables):
        raise ValueError("every client must vote on the same clusters")

    proportions = np.full((k, len(tables)), np.nan)
    sizes = np.zeros((k, len(tables)), dtype=np.int64)
    for client, table in enumerate(tables):
        for cluster, vote in enumerate(table):
            if vote.size > 0 and vote.benign_fraction is not None:
                proportions[cluster, client] = vote.benign_fraction
                sizes[cluster, client] = vote.size

    totals = sizes.sum(axis=1)
    weighted = np.where(sizes > 0, np.nan_to_num(proportions) * sizes, 0.0).sum(axis=1)
    pooled = np.full(k, np.nan)
    populated = totals > 0
    pooled[populated] = weighted[populated] / totals[populated]
    # Clusters with no members anywhere stay attack.
    labels = np.where(populated & (np.nan_to_num(pooled) > BENIGN_THRESHOLD), Label.BENIGN, Label.ATTACK)
    if not populated.all():
        logger.debug("%d clusters have no members at any client", int((~populated).sum()))
    return VoteTable(
        proportions=proportions,
        sizes=sizes,
        pooled=pooled,
        labels=labels.astype(np.int8),
    )


def predict(points: Dataset | np.ndarray, centroids: CentroidSet, votes: VoteTable) -> np.ndarray:
    if votes.k != centroids.k:
        raise ValueError(f"votes cover {votes.k} clusters, model has {centroids.k}")
    matrix = points.features if isinstance(points, Dataset) else np.asarray(points, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != centroids.dim:
        raise DimensionMismatchError("points and centroids differ in dimension")
    indices, _ = nearest_many(matrix, centroids)
    return votes.labels[indices]


def score(predictions: Sequence[int] | np.ndarray, truth: Sequence[int] | np.ndarray) -> MetricsReport:
    predicted = np.asarray(predictions, dtype=np.int8)
    actual = np.asarray(truth, dtype=np.int8)
    if predicted.shape != actual.shape:
        raise LengthMismatchError(f"{predicted.size} predictions for {actual.size} labels")

    attack = Label.ATTACK
    tp = int(((predicted == attack) & (actual == attack)).sum())
    fp = int(((predicted == attack) & (actual != attack)).sum())
    tn = int(((predicted != attack) & (actual != attack)).sum())
    fn = int(((predicted != attack) & (actual == attack)).sum())
    total = tp + fp + tn + fn

    degenerate = False
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision, degenerate = 0.0, True
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall, degenerate = 0.0, True
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    if degenerate:
        logger.warning("Degenerate confusion matrix: tp=%d fp=%d fn=%d", tp, fp, fn)
    return MetricsReport(
        accuracy=(tp + tn) / total if total else 0.0,
        precision=precision,
        recall=recall,
        f1=f1,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        degenerate=degenerate,
    )
