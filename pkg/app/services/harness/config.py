from __future__ import annotations

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..dataset.partition import DEFAULT_MIN_SHARD_ROWS
from ..dataset.preprocess import DEFAULT_SELECTION_THRESHOLD
from ..dataset.schema import DatasetSchema
from ..dataset.types import PartitionScheme
from ..kmeans.distance import Metric
from ..kmeans.lloyd import DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE


class ConfigError(ValueError):
    """Raised when an experiment configuration cannot be read or validated."""

    def __init__(self, message: str, *, path: Path | None = None) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class Algorithm(str, Enum):
    CENTRALIZED = "centralized"
    GARST_REINDERS = "garst-reinders"
    FED_KMEANS_FED_INIT = "fed-kmeans-fed-init"

    @property
    def federated(self) -> bool:
        return self is not Algorithm.CENTRALIZED


class SelectionMode(str, Enum):
    AUTO = "auto"
    MANUAL = "manual"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class SweepGrid(_Frozen):
    k_min: int = Field(default=1, ge=1)
    k_max: int = Field(default=70, ge=1)
    k_stride: int = Field(default=1, ge=1)
    # Above this k the grid switches to the coarse stride.
    coarse_above: int = Field(default=70, ge=1)
    coarse_stride: int = Field(default=4, ge=1)
    rounds: tuple[int, ...] = (0, 5, 10)

    @field_validator("rounds")
    @classmethod
    def _rounds(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("at least one r value is required")
        if any(r < 0 for r in value):
            raise ValueError("r values must be non-negative")
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _range(self) -> "SweepGrid":
        if self.k_max < self.k_min:
            raise ValueError(f"k_max={self.k_max} is below k_min={self.k_min}")
        return self

    def k_values(self) -> list[int]:
        values = []
        k = self.k_min
        while k <= self.k_max:
            values.append(k)
            k += self.k_stride if k < self.coarse_above else self.coarse_stride
        return values


class SeedConfig(_Frozen):
    root: int = Field(default=0, ge=0)
    # Train/test shuffle; defaults to the root seed.
    split: int | None = Field(default=None, ge=0)

    @property
    def split_seed(self) -> int:
        return self.root if self.split is None else self.split


class PartitionConfig(_Frozen):
    scheme: PartitionScheme = PartitionScheme.BY_HASH
    n_cap: int | None = Field(default=3, ge=1)
    min_shard_rows: int = Field(default=DEFAULT_MIN_SHARD_ROWS, ge=1)


class SelectionConfig(_Frozen):
    mode: SelectionMode = SelectionMode.AUTO
    k: int | None = Field(default=None, ge=1)
    r: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _manual(self) -> "SelectionConfig":
        if self.mode is SelectionMode.MANUAL and self.k is None:
            raise ValueError("manual selection needs k")
        return self


class SyntheticConfig(_Frozen):
    rows_per_blob: int = Field(default=50, ge=1)
    spread: float = Field(default=0.03, gt=0.0)
    seed: int = Field(default=0, ge=0)


class ExperimentConfig(_Frozen):
    dataset_path: Path | None = None
    synthetic: SyntheticConfig | None = None
    dataset: DatasetSchema = Field(default_factory=DatasetSchema)
    selection_threshold: float = Field(default=DEFAULT_SELECTION_THRESHOLD, gt=0.0, le=1.0)
    train_fraction: float = Field(default=0.8, gt=0.0, lt=1.0)
    partition: PartitionConfig = Field(default_factory=PartitionConfig)
    grid: SweepGrid = Field(default_factory=SweepGrid)
    seeds: SeedConfig = Field(default_factory=SeedConfig)
    algorithms: tuple[Algorithm, ...] = tuple(Algorithm)
    metric: Metric = Metric.SQUARED_EUCLIDEAN
    # Which split the clients vote on; metrics are always computed on the test set.
    vote_on: Literal["train", "test"] = "train"
    selection: SelectionConfig = Field(default_factory=SelectionConfig)
    output_dir: Path = Path("out")
    max_iters: int = Field(default=DEFAULT_MAX_ITERS, ge=1)
    tolerance: float = Field(default=DEFAULT_TOLERANCE, ge=0.0)

    @field_validator("algorithms")
    @classmethod
    def _algorithms(cls, value: tuple[Algorithm, ...]) -> tuple[Algorithm, ...]:
        if not value:
            raise ValueError("at least one algorithm is required")
        return tuple(dict.fromkeys(value))

    @model_validator(mode="after")
    def _source(self) -> "ExperimentConfig":
        if (self.dataset_path is None) == (self.synthetic is None):
            raise ValueError("set exactly one of dataset_path and synthetic")
        return self

    @classmethod
    def from_mapping(cls, data: dict[str, Any], *, path: Path | None = None) -> "ExperimentConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
                for error in exc.errors()
            )
            raise ConfigError(problems, path=path) from exc

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        config_path = Path(path)
        try:
            data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror or exc}", path=config_path) from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}", path=config_path) from exc
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("top level must be a mapping", path=config_path)
        dataset_path = data.get("dataset_path")
        if dataset_path is not None and not Path(dataset_path).is_absolute():
            data = {**data, "dataset_path": str(config_path.parent / dataset_path)}
        return cls.from_mapping(data, path=config_path)

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        output_dir: Path | None = None,
        algorithms: tuple[Algorithm, ...] | None = None,
        k_min: int | None = None,
        k_max: int | None = None,
        k_stride: int | None = None,
        rounds: tuple[int, ...] | None = None,
    ) -> "ExperimentConfig":
        """Apply command-line overrides; the result is validated like a file."""
        data = self.model_dump(mode="json")
        if seed is not None:
            data["seeds"]["root"] = seed
        if output_dir is not None:
            data["output_dir"] = str(output_dir)
        if algorithms is not None:
            data["algorithms"] = [algorithm.value for algorithm in algorithms]
        for key, value in (("k_min", k_min), ("k_max", k_max), ("k_stride", k_stride)):
            if value is not None:
                data["grid"][key] = value
        if rounds is not None:
            data["grid"]["rounds"] = list(rounds)
        return self.from_mapping(data)

    def canonical_json(self) -> str:
        data = self.model_dump(mode="json", exclude={"output_dir"})
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
