from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..dataset.types import Dataset
from .distance import as_matrix, nearest_many
from .seeding import distinct_support, kmeanspp_init
from .types import Assignment, CentroidSet, DimensionMismatchError, InfeasibleClusteringError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERS = 100
DEFAULT_TOLERANCE = 1e-8


@dataclass(frozen=True, slots=True, eq=False)
class LloydRun:
    centroids: CentroidSet
    assignment: Assignment
    # Weighted inertia of every assignment step, final assignment included.
    inertia_history: tuple[float, ...]
    iterations: int
    converged: bool
    dropped: int


def lloyd_weighted_trace(
    points: Dataset | np.ndarray,
    weights: np.ndarray | None,
    k: int,
    init: CentroidSet,
    *,
    max_iters: int = DEFAULT_MAX_ITERS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> LloydRun:
    matrix = as_matrix(points)
    n_rows = matrix.shape[0]
    w = np.ones(n_rows) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (n_rows,):
        raise ValueError(f"expected {n_rows} weights, got {w.shape[0] if w.ndim else 0}")
    if np.any(w < 0) or not w.sum() > 0:
        raise ValueError("weights must be non-negative with at least one positive entry")
    if init.k != k:
        raise ValueError(f"init holds {init.k} centroids, k={k}")
    if init.dim != matrix.shape[1]:
        raise DimensionMismatchError(f"init has dimension {init.dim}, points {matrix.shape[1]}")
    if max_iters < 0:
        raise ValueError("max_iters must be non-negative")

    centroids = init.vectors.copy()
    history: list[float] = []
    converged = False
    iterations = 0
    dropped = 0
    for _ in range(max_iters):
        labels, distances = nearest_many(matrix, centroids)
        history.append(float(np.dot(w, distances)))
        mass = np.bincount(labels, weights=w, minlength=centroids.shape[0])
        alive = mass > 0
        if not alive.all():
            # Empty clusters leave the run for good; remaining indices shift down.
            dropped += int((~alive).sum())
            remap = np.cumsum(alive) - 1
            centroids = centroids[alive]
            labels = remap[labels]
            mass = mass[alive]
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, matrix * w[:, None])
        updated = sums / mass[:, None]
        shift = float(((updated - centroids) ** 2).sum(axis=1).max())
        centroids = updated
        iterations += 1
        if shift < tolerance:
            converged = True
            break

    labels, distances = nearest_many(matrix, centroids)
    counts = np.bincount(labels, minlength=centroids.shape[0])
    if np.any(counts == 0):
        keep = counts > 0
        dropped += int((~keep).sum())
        labels = (np.cumsum(keep) - 1)[labels]
        centroids = centroids[keep]
        counts = counts[keep]
    history.append(float(np.dot(w, distances)))
    if dropped:
        logger.debug("Lloyd dropped %d empty clusters, k=%d", dropped, centroids.shape[0])
    return LloydRun(
        centroids=CentroidSet(centroids),
        assignment=Assignment(labels=labels, sizes=counts),
        inertia_history=tuple(history),
        iterations=iterations,
        converged=converged,
        dropped=dropped,
    )


def lloyd_weighted(
    points: Dataset | np.ndarray,
    weights: np.ndarray | None,
    k: int,
    init: CentroidSet,
    *,
    max_iters: int = DEFAULT_MAX_ITERS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> tuple[CentroidSet, Assignment]:
    run = lloyd_weighted_trace(
        points, weights, k, init, max_iters=max_iters, tolerance=tolerance
    )
    return run.centroids, run.assignment


def fit_kmeans(
    points: Dataset | np.ndarray,
    k: int,
    seed: int | np.random.Generator,
    *,
    weights: np.ndarray | None = None,
    allow_fewer: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    tolerance: float = DEFAULT_TOLERANCE,
) -> LloydRun:
    """K-means++ seeding followed by weighted Lloyd's algorithm to convergence.

    With ``allow_fewer`` the number of clusters shrinks to the number of distinct
    weighted rows instead of failing.
    """
    matrix = as_matrix(points)
    if allow_fewer:
        available = distinct_support(matrix, weights)
        if available == 0:
            raise InfeasibleClusteringError("no weighted rows to cluster")
        if available < k:
            logger.debug("Reducing k from %d to %d distinct rows", k, available)
            k = available
    init = kmeanspp_init(matrix, k, seed, weights=weights)
    return lloyd_weighted_trace(matrix, weights, k, init, max_iters=max_iters, tolerance=tolerance)
