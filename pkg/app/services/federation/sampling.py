"""Sampling laws of the federated K-means++ initialisation.

Uniform and D^2 sampling over the pooled data factor into a client choice
followed by a local choice: P(x) = P(client j) * P(x | client j), with
P(client j) = |X_j| / |X| for the first centroid and Z_j / Z afterwards.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..kmeans.distance import point_potentials
from ..kmeans.types import CentroidSet


def client_selection_masses(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Server-side client law: sizes |X_j| or potentials Z_j, normalised."""
    masses = np.asarray(values, dtype=np.float64)
    total = masses.sum()
    if not total > 0:
        raise ValueError("no client carries any mass")
    return masses / total


def local_uniform_masses(n_rows: int) -> np.ndarray:
    return np.ones(n_rows, dtype=np.float64)


def local_d2_masses(points: np.ndarray, centroids: CentroidSet | np.ndarray) -> np.ndarray:
    """Unnormalised local D^2 law: ``d(x, c)`` per row, recomputed from scratch."""
    return point_potentials(points, centroids)
