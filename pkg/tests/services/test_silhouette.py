from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.kmeans.distance import Metric
from app.services.kmeans.types import CentroidSet
from app.services.silhouette import (
    UndefinedSilhouetteError,
    client_mean_silhouette,
    federated_silhouette,
    simplified_silhouette_point,
    simplified_silhouette_scores,
)


@pytest.mark.parametrize(
    ("point", "centroids", "expected"),
    [
        ([0.0, 0.0], [[0.0, 0.0], [10.0, 0.0]], 1.0),
        ([1.0, 0.0], [[0.0, 0.0], [2.0, 0.0]], 0.0),
        ([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], 0.0),
        ([0.0, 0.0], [[1.0, 0.0], [0.0, 2.0]], 0.75),
    ],
)
def test_point_scores(point, centroids, expected):
    score = simplified_silhouette_point(np.array(point), CentroidSet(np.array(centroids)))

    assert score == pytest.approx(expected)


def test_euclidean_metric_takes_square_roots():
    centroids = CentroidSet(np.array([[1.0, 0.0], [0.0, 2.0]]))

    score = simplified_silhouette_point(np.zeros(2), centroids, Metric.EUCLIDEAN)

    assert score == pytest.approx(0.5)


def test_single_centroid_is_undefined():
    with pytest.raises(UndefinedSilhouetteError):
        simplified_silhouette_scores(np.zeros((3, 2)), CentroidSet(np.zeros((1, 2))))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_federated_score_equals_pooled_mean(seed):
    rng = np.random.default_rng(seed)
    points = rng.random((int(rng.integers(4, 60)), 3))
    centroids = CentroidSet(rng.random((int(rng.integers(2, 6)), 3)))
    cuts = np.sort(rng.choice(np.arange(1, points.shape[0]), size=2, replace=False))
    shards = np.split(points, cuts)

    federated = federated_silhouette([client_mean_silhouette(shard, centroids) for shard in shards])

    pooled = simplified_silhouette_scores(points, centroids).mean()
    assert federated == pytest.approx(pooled, abs=1e-12)
    assert -1.0 <= federated <= 1.0


@pytest.mark.parametrize("reports", [[], [(0.5, 0)]])
def test_federated_score_rejects_bad_reports(reports):
    with pytest.raises(ValueError):
        federated_silhouette(reports)
