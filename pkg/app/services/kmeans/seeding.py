from __future__ import annotations

import logging

import numpy as np

from ...utils.seeding import as_generator, sample_index
from ..dataset.types import Dataset
from .distance import as_matrix, squared_distances
from .types import CentroidSet, InfeasibleClusteringError

logger = logging.getLogger(__name__)


def _weights(points: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    if weights is None:
        return np.ones(points.shape[0], dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (points.shape[0],):
        raise ValueError("one weight per row expected")
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    return weights


def distinct_support(points: np.ndarray, weights: np.ndarray | None = None) -> int:
    """Number of distinct rows carrying positive weight."""
    if weights is not None:
        points = points[np.asarray(weights) > 0]
    if points.shape[0] == 0:
        return 0
    return int(np.unique(points, axis=0).shape[0])


def kmeanspp_init(
    data: Dataset | np.ndarray,
    k: int,
    seed: int | np.random.Generator,
    *,
    weights: np.ndarray | None = None,
) -> CentroidSet:
    """K-means++ seeding: first centroid by weight, the rest by weight times D^2."""
    if k < 1:
        raise ValueError("k must be at least 1")
    points = as_matrix(data)
    mass = _weights(points, weights)
    available = distinct_support(points, mass)
    if available < k:
        raise InfeasibleClusteringError(f"k={k} exceeds the {available} distinct rows available")

    rng = as_generator(seed)
    chosen = [sample_index(rng, mass)]
    closest = squared_distances(points, points[chosen[0]][None, :])[:, 0]
    for _ in range(1, k):
        d2_mass = mass * closest
        if not d2_mass.sum() > 0.0:
            raise InfeasibleClusteringError(f"no mass left after {len(chosen)} centroids")
        index = sample_index(rng, d2_mass)
        chosen.append(index)
        closest = np.minimum(closest, squared_distances(points, points[index][None, :])[:, 0])
    logger.debug("K-means++ picked rows %s", chosen)
    return CentroidSet(points[chosen])
