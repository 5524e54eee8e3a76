"""Simplified silhouette, per point, per client and aggregated across clients.

``a(x)`` is the distance to the assigned (nearest) centroid, ``b(x)`` the
distance to the closest *other* centroid by index, ``s(x) = (b - a) / max(a, b)``.
The distance is squared Euclidean unless :class:`Metric.EUCLIDEAN` is requested.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dataset.types import Dataset
from .kmeans.distance import Metric, apply_metric, as_matrix, squared_distances
from .kmeans.types import CentroidSet


class UndefinedSilhouetteError(ValueError):
    """Raised for k = 1, where no second centroid exists to define b(x)."""


@dataclass(frozen=True, slots=True)
class SilhouetteReport:
    client_means: tuple[float, ...]
    client_counts: tuple[int, ...]
    score: float


def simplified_silhouette_scores(
    points: Dataset | np.ndarray,
    centroids: CentroidSet,
    metric: Metric = Metric.SQUARED_EUCLIDEAN,
) -> np.ndarray:
    if centroids.k < 2:
        raise UndefinedSilhouetteError("simplified silhouette needs at least two centroids")
    distances = apply_metric(squared_distances(as_matrix(points), centroids), metric)
    rows = np.arange(distances.shape[0])
    own = np.argmin(distances, axis=1)
    a = distances[rows, own]
    others = distances.copy()
    others[rows, own] = np.inf
    b = others.min(axis=1)
    denominator = np.maximum(a, b)
    scores = np.zeros_like(a)
    np.divide(b - a, denominator, out=scores, where=denominator > 0)
    return np.clip(scores, -1.0, 1.0)


def simplified_silhouette_point(
    point: np.ndarray,
    centroids: CentroidSet,
    metric: Metric = Metric.SQUARED_EUCLIDEAN,
) -> float:
    vector = np.asarray(point, dtype=np.float64)
    return float(simplified_silhouette_scores(vector[None, :], centroids, metric)[0])


def client_mean_silhouette(
    shard: Dataset | np.ndarray,
    centroids: CentroidSet,
    metric: Metric = Metric.SQUARED_EUCLIDEAN,
) -> tuple[float, int]:
    matrix = as_matrix(shard)
    if matrix.shape[0] == 0:
        raise ValueError("cannot score an empty shard")
    scores = simplified_silhouette_scores(matrix, centroids, metric)
    return float(scores.mean()), int(scores.size)


def federated_silhouette(reports: Sequence[tuple[float, int]]) -> float:
    """Size-weighted mean of per-client mean scores."""
    if not reports:
        raise ValueError("at least one client report is required")
    if any(count <= 0 for _, count in reports):
        raise ValueError("client counts must be positive")
    total = sum(count for _, count in reports)
    return float(sum(count * mean for mean, count in reports) / total)
