from __future__ import annotations

import numpy as np
import pytest

from app.services.kmeans.distance import (
    Metric,
    apply_metric,
    centroid_set_gap,
    inertia,
    nearest,
    nearest_many,
    point_potentials,
    squared_distances,
)
from app.services.kmeans.types import Assignment, CentroidSet, DimensionMismatchError


def test_nearest_returns_index_and_squared_distance():
    centroids = CentroidSet(np.array([[0.0, 0.0], [1.0, 1.0]]))

    assert nearest(np.array([0.9, 0.8]), centroids) == (1, pytest.approx(0.05))


def test_nearest_breaks_ties_towards_lowest_index():
    centroids = CentroidSet(np.array([[0.0], [1.0], [0.0]]))

    index, distance = nearest(np.array([0.5]), centroids)

    assert index == 0
    assert distance == pytest.approx(0.25)


def test_nearest_many_matches_single_lookups():
    rng = np.random.default_rng(3)
    points = rng.random((20, 3))
    centroids = CentroidSet(rng.random((4, 3)))

    indices, distances = nearest_many(points, centroids)

    for row, (index, distance) in enumerate(zip(indices, distances)):
        assert (index, distance) == nearest(points[row], centroids)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(DimensionMismatchError):
        squared_distances(np.zeros((3, 2)), CentroidSet(np.zeros((1, 3))))


def test_squared_distances_span_chunks():
    points = np.linspace(0.0, 1.0, 9000)[:, None]
    centroids = CentroidSet(np.array([[0.0], [1.0]]))

    distances = squared_distances(points, centroids)

    np.testing.assert_allclose(distances[:, 0], points[:, 0] ** 2)
    np.testing.assert_allclose(distances[:, 1], (1.0 - points[:, 0]) ** 2)


def test_euclidean_metric_takes_square_root():
    squared = np.array([[4.0, 9.0]])

    assert apply_metric(squared, Metric.EUCLIDEAN).tolist() == [[2.0, 3.0]]
    assert apply_metric(squared, Metric.SQUARED_EUCLIDEAN) is squared


def test_weighted_inertia():
    points = np.array([[0.0], [1.0], [3.0]])
    centroids = CentroidSet(np.array([[0.0], [2.0]]))

    assert point_potentials(points, centroids).tolist() == [0.0, 1.0, 1.0]
    assert inertia(points, centroids) == 2.0
    assert inertia(points, centroids, np.array([5.0, 2.0, 3.0])) == 5.0


def test_centroid_set_gap_is_zero_for_same_multiset():
    left = CentroidSet(np.array([[0.0, 1.0], [1.0, 0.0]]))
    right = CentroidSet(np.array([[1.0, 0.0], [0.0, 1.0]]))

    assert centroid_set_gap(left, right) == 0.0
    assert left.as_multiset() == right.as_multiset()


def test_centroid_set_is_read_only():
    centroids = CentroidSet(np.array([[0.0, 1.0]]))

    with pytest.raises(ValueError):
        centroids.vectors[0, 0] = 5.0


def test_centroid_set_needs_a_matrix_with_rows():
    with pytest.raises(ValueError):
        CentroidSet(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        CentroidSet(np.zeros(3))


def test_assignment_validates_sizes():
    assignment = Assignment.from_labels(np.array([0, 2, 2]), k=3)

    assert assignment.sizes.tolist() == [1, 0, 2]
    with pytest.raises(ValueError):
        Assignment(labels=np.array([0, 1]), sizes=np.array([2, 0]))
