"""Exact probability laws of K-means++ seeding, for small datasets.

The centralized law samples the first centroid uniformly and every further one
with probability d(x, c) / sum d(., c). The federated law is evaluated in its
factored form, client first and row second, so the two can be compared
numerically on any partition of the same rows.
"""

from __future__ import annotations

from collections.abc import Sequence
from itertools import permutations

import numpy as np

from ..dataset.types import Dataset
from ..kmeans.distance import as_matrix
from .sampling import client_selection_masses, local_d2_masses, local_uniform_masses

MAX_EXACT_POINTS = 8

SeedOrder = tuple[int, ...]


def _check_size(n_rows: int, k: int) -> None:
    if n_rows > MAX_EXACT_POINTS:
        raise ValueError(f"exact laws are limited to {MAX_EXACT_POINTS} points, got {n_rows}")
    if not 1 <= k <= n_rows:
        raise ValueError(f"k must lie in [1, {n_rows}]")


def centralized_sequence_probability(points: Dataset | np.ndarray, sequence: Sequence[int]) -> float:
    matrix = as_matrix(points)
    probability = 1.0 / matrix.shape[0]
    for step in range(1, len(sequence)):
        masses = local_d2_masses(matrix, matrix[list(sequence[:step])])
        total = masses.sum()
        if total <= 0.0:
            return 0.0
        probability *= masses[sequence[step]] / total
    return float(probability)


def federated_sequence_probability(
    shards: Sequence[Dataset | np.ndarray],
    sequence: Sequence[tuple[int, int]],
) -> float:
    """Probability of revealing ``(client, local row)`` pairs in this order."""
    matrices = [as_matrix(shard) for shard in shards]
    chosen: list[np.ndarray] = []
    probability = 1.0
    for step, (client, row) in enumerate(sequence):
        if step == 0:
            client_law = client_selection_masses([m.shape[0] for m in matrices])
            local = local_uniform_masses(matrices[client].shape[0])
        else:
            centroids = np.vstack(chosen)
            potentials = [local_d2_masses(m, centroids).sum() for m in matrices]
            if not sum(potentials) > 0.0:
                return 0.0
            client_law = client_selection_masses(potentials)
            local = local_d2_masses(matrices[client], centroids)
        if local.sum() <= 0.0:
            return 0.0
        probability *= client_law[client] * (local[row] / local.sum())
        chosen.append(matrices[client][row])
    return float(probability)


def centralized_law(points: Dataset | np.ndarray, k: int) -> dict[SeedOrder, float]:
    """Probability of every ordered sequence of k distinct row indices."""
    matrix = as_matrix(points)
    _check_size(matrix.shape[0], k)
    law = {}
    for sequence in permutations(range(matrix.shape[0]), k):
        probability = centralized_sequence_probability(matrix, sequence)
        if probability > 0.0:
            law[sequence] = probability
    return law


def federated_law(shards: Sequence[Dataset | np.ndarray], k: int) -> dict[SeedOrder, float]:
    """Same as :func:`centralized_law`, keyed by row index in the concatenated shards."""
    matrices = [as_matrix(shard) for shard in shards]
    owners = [(client, row) for client, m in enumerate(matrices) for row in range(m.shape[0])]
    _check_size(len(owners), k)
    law = {}
    for sequence in permutations(range(len(owners)), k):
        probability = federated_sequence_probability(matrices, [owners[i] for i in sequence])
        if probability > 0.0:
            law[sequence] = probability
    return law


def max_law_difference(left: dict[SeedOrder, float], right: dict[SeedOrder, float]) -> float:
    keys = set(left) | set(right)
    return max((abs(left.get(key, 0.0) - right.get(key, 0.0)) for key in keys), default=0.0)
