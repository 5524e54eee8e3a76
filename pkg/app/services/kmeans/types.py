from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    """Raised when points and centroids live in different feature spaces."""


class InfeasibleClusteringError(ValueError):
    """Raised when k centroids cannot be placed on the available distinct points."""


@dataclass(frozen=True, slots=True, eq=False)
class CentroidSet:
    """Ordered centroids ``c_1 .. c_k`` sharing one feature dimension."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim != 2:
            raise ValueError("centroids must form a 2-D matrix")
        if vectors.shape[0] < 1:
            raise ValueError("a centroid set needs at least one centroid")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def k(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return self.k

    def as_multiset(self, decimals: int | None = None) -> list[tuple[float, ...]]:
        """Centroids as sorted tuples, for order-free comparisons."""
        vectors = self.vectors if decimals is None else np.round(self.vectors, decimals)
        return sorted(tuple(float(value) for value in row) for row in vectors)


@dataclass(frozen=True, slots=True, eq=False)
class Assignment:
    """Cluster index per row plus the resulting cluster sizes."""

    labels: np.ndarray
    sizes: np.ndarray

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        sizes = np.asarray(self.sizes, dtype=np.int64)
        if labels.size and (labels.min() < 0 or labels.max() >= sizes.size):
            raise ValueError("cluster index out of range")
        if int(sizes.sum()) != labels.size:
            raise ValueError("cluster sizes must sum to the number of rows")
        if not np.array_equal(np.bincount(labels, minlength=sizes.size), sizes):
            raise ValueError("cluster sizes disagree with the labels")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sizes", sizes)

    @property
    def k(self) -> int:
        return int(self.sizes.size)

    @classmethod
    def from_labels(cls, labels: np.ndarray, k: int) -> "Assignment":
        labels = np.asarray(labels, dtype=np.int64)
        return cls(labels=labels, sizes=np.bincount(labels, minlength=k))
