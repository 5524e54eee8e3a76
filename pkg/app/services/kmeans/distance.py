from __future__ import annotations

from enum import Enum

import numpy as np

from ..dataset.types import Dataset
from .types import CentroidSet, DimensionMismatchError

# Rows per block when building the point-to-centroid distance matrix.
CHUNK_ROWS = 4096


class Metric(str, Enum):
    SQUARED_EUCLIDEAN = "squared"
    EUCLIDEAN = "euclidean"


def as_matrix(data: Dataset | np.ndarray) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.features
    matrix = np.asarray(data, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("points must form a 2-D matrix")
    return matrix


def _centroid_matrix(centroids: CentroidSet | np.ndarray) -> np.ndarray:
    if isinstance(centroids, CentroidSet):
        return centroids.vectors
    return np.asarray(centroids, dtype=np.float64)


def squared_distances(points: np.ndarray, centroids: CentroidSet | np.ndarray) -> np.ndarray:
    """``(n, k)`` matrix of ``||x - c||^2``, computed from explicit differences."""
    points = np.asarray(points, dtype=np.float64)
    matrix = _centroid_matrix(centroids)
    if points.shape[-1] != matrix.shape[1]:
        raise DimensionMismatchError(
            f"points have dimension {points.shape[-1]}, centroids {matrix.shape[1]}"
        )
    out = np.empty((points.shape[0], matrix.shape[0]), dtype=np.float64)
    for start in range(0, points.shape[0], CHUNK_ROWS):
        block = points[start : start + CHUNK_ROWS]
        diff = block[:, None, :] - matrix[None, :, :]
        out[start : start + CHUNK_ROWS] = (diff * diff).sum(axis=2)
    return out


def apply_metric(squared: np.ndarray, metric: Metric) -> np.ndarray:
    if metric is Metric.EUCLIDEAN:
        return np.sqrt(squared)
    return squared


def nearest_many(
    points: Dataset | np.ndarray, centroids: CentroidSet | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest centroid index and squared distance per row; ties go to the lowest index."""
    distances = squared_distances(as_matrix(points), centroids)
    indices = np.argmin(distances, axis=1)
    return indices.astype(np.int64), distances[np.arange(distances.shape[0]), indices]


def nearest(point: np.ndarray, centroids: CentroidSet) -> tuple[int, float]:
    vector = np.asarray(point, dtype=np.float64)
    if vector.ndim != 1:
        raise ValueError("point must be a 1-D vector")
    indices, distances = nearest_many(vector[None, :], centroids)
    return int(indices[0]), float(distances[0])


def point_potentials(points: Dataset | np.ndarray, centroids: CentroidSet | np.ndarray) -> np.ndarray:
    """``d(x, c)`` for every row: squared distance to the closest centroid."""
    return squared_distances(as_matrix(points), centroids).min(axis=1)


def inertia(
    points: Dataset | np.ndarray,
    centroids: CentroidSet | np.ndarray,
    weights: np.ndarray | None = None,
) -> float:
    potentials = point_potentials(points, centroids)
    if weights is None:
        return float(potentials.sum())
    return float(np.dot(np.asarray(weights, dtype=np.float64), potentials))


def centroid_set_gap(reference: CentroidSet, other: CentroidSet) -> float:
    """Mean squared distance from each reference centroid to its closest counterpart."""
    return float(point_potentials(reference.vectors, other).mean())
