from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Union

import numpy as np
import pandas as pd

# A parsed feature cell: finite or infinite float, categorical text, or missing.
Cell = Union[float, str, None]


class Label(IntEnum):
    BENIGN = 0
    ATTACK = 1


class PartitionScheme(str, Enum):
    BY_CLASS = "by-class"
    BY_KEY = "by-key"
    BY_HASH = "by-hash"


@dataclass(frozen=True, slots=True, eq=False)
class RawTable:
    """Parsed CSV before preprocessing.

    ``frame`` keeps one column per CSV column. Feature cells are :data:`Cell`
    values; role columns (label, class, partition key) keep their stripped text,
    ``None`` when empty. The frame index is the 0-based data row number.
    """

    frame: pd.DataFrame
    label_column: str | None = None
    benign_value: str = "0"
    class_column: str | None = None
    key_column: str | None = None

    @property
    def columns(self) -> list[str]:
        return [str(column) for column in self.frame.columns]

    @property
    def rows(self) -> list[tuple[Cell, ...]]:
        return [tuple(row) for row in self.frame.itertuples(index=False, name=None)]

    @property
    def role_columns(self) -> list[str]:
        roles = (self.label_column, self.class_column, self.key_column)
        return [column for column in roles if column is not None]

    @property
    def feature_columns(self) -> list[str]:
        roles = set(self.role_columns)
        return [column for column in self.columns if column not in roles]

    def __len__(self) -> int:
        return len(self.frame)


@dataclass(frozen=True, slots=True, eq=False)
class Dataset:
    """Preprocessed feature matrix with optional labels and partition metadata."""

    features: np.ndarray
    row_ids: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray | None = None
    classes: np.ndarray | None = None
    keys: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        n_rows, dim = self.features.shape
        if len(self.feature_names) != dim:
            raise ValueError(f"{dim} feature columns but {len(self.feature_names)} names")
        if self.row_ids.shape != (n_rows,):
            raise ValueError("row_ids must hold one id per row")
        if np.unique(self.row_ids).size != n_rows:
            raise ValueError("row ids must be unique")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if n_rows and (self.features.min() < 0.0 or self.features.max() > 1.0):
            raise ValueError("features must lie in [0, 1]")
        for name in ("labels", "classes", "keys"):
            column = getattr(self, name)
            if column is not None and column.shape != (n_rows,):
                raise ValueError(f"{name} must hold one value per row")

    @property
    def n_rows(self) -> int:
        return int(self.features.shape[0])

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def __len__(self) -> int:
        return self.n_rows

    def take(self, indices: np.ndarray) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            features=self.features[indices],
            row_ids=self.row_ids[indices],
            feature_names=self.feature_names,
            labels=None if self.labels is None else self.labels[indices],
            classes=None if self.classes is None else self.classes[indices],
            keys=None if self.keys is None else self.keys[indices],
        )

    def distinct_rows(self) -> int:
        if self.n_rows == 0:
            return 0
        return int(np.unique(self.features, axis=0).shape[0])

    @classmethod
    def concat(cls, parts: list["Dataset"]) -> "Dataset":
        if not parts:
            raise ValueError("nothing to concatenate")
        first = parts[0]

        def _stack(name: str) -> np.ndarray | None:
            columns = [getattr(part, name) for part in parts]
            if any(column is None for column in columns):
                return None
            return np.concatenate(columns)

        return cls(
            features=np.vstack([part.features for part in parts]),
            row_ids=np.concatenate([part.row_ids for part in parts]),
            feature_names=first.feature_names,
            labels=_stack("labels"),
            classes=_stack("classes"),
            keys=_stack("keys"),
        )


@dataclass(frozen=True, slots=True, eq=False)
class FederatedDataset:
    shards: tuple[Dataset, ...]
    scheme: PartitionScheme
    shard_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.shards:
            raise ValueError("a federated dataset needs at least one shard")
        if any(shard.n_rows == 0 for shard in self.shards):
            raise ValueError("every shard must be non-empty")
        ids = np.concatenate([shard.row_ids for shard in self.shards])
        if np.unique(ids).size != ids.size:
            raise ValueError("shards must be disjoint by row id")
        if self.shard_names and len(self.shard_names) != len(self.shards):
            raise ValueError("one name per shard expected")

    @property
    def n_clients(self) -> int:
        return len(self.shards)

    @property
    def sizes(self) -> list[int]:
        return [shard.n_rows for shard in self.shards]

    def pooled(self) -> Dataset:
        return Dataset.concat(list(self.shards))

    def single_class_clients(self) -> int:
        """Number of labeled shards holding only one of benign/attack."""
        count = 0
        for shard in self.shards:
            if shard.labels is not None and np.unique(shard.labels).size == 1:
                count += 1
        return count
