from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from .types import Dataset, FederatedDataset, PartitionScheme

logger = logging.getLogger(__name__)

DEFAULT_MIN_SHARD_ROWS = 20
OVERFLOW_SHARD = "<overflow>"


class PartitionConfigError(ValueError):
    """Raised when a partition scheme lacks the per-row data it groups by."""


def partition_federated(
    train: Dataset,
    scheme: PartitionScheme | str,
    *,
    keys: Sequence[object] | None = None,
    n_cap: int | None = None,
    min_shard_rows: int = DEFAULT_MIN_SHARD_ROWS,
) -> FederatedDataset:
    scheme = PartitionScheme(scheme)
    if train.n_rows == 0:
        raise PartitionConfigError("cannot partition an empty training set")
    if n_cap is not None and n_cap < 1:
        raise PartitionConfigError("client cap must be at least 1")

    if scheme is PartitionScheme.BY_HASH:
        groups = _round_robin(train.n_rows, n_cap)
    elif scheme is PartitionScheme.BY_CLASS:
        if train.classes is None:
            raise PartitionConfigError("by-class partition needs a class column captured at load time")
        groups = _group(train.classes)
    else:
        values = _resolve_keys(train, keys)
        groups = _apply_floor(_group(values), min_shard_rows)

    if scheme is not PartitionScheme.BY_HASH and n_cap is not None:
        groups = _cap(groups, n_cap)

    names = tuple(groups)
    shards = tuple(train.take(groups[name]) for name in names)
    logger.info(
        "Partitioned %d rows into %d clients (%s): sizes %s",
        train.n_rows,
        len(shards),
        scheme.value,
        [shard.n_rows for shard in shards],
    )
    return FederatedDataset(shards=shards, scheme=scheme, shard_names=names)


def _resolve_keys(train: Dataset, keys: Sequence[object] | None) -> np.ndarray:
    if keys is not None:
        values = np.asarray([str(key) for key in keys], dtype=object)
        if values.shape != (train.n_rows,):
            raise PartitionConfigError(f"expected {train.n_rows} keys, got {len(values)}")
        return values
    if train.keys is None:
        raise PartitionConfigError("by-key partition needs a key per row")
    return train.keys


def _ordered(groups: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    # Largest shard first, ties by name; the overflow shard always goes last.
    named = sorted(
        (item for item in groups.items() if item[0] != OVERFLOW_SHARD),
        key=lambda item: (-item[1].size, item[0]),
    )
    ordered = dict(named)
    if OVERFLOW_SHARD in groups:
        ordered[OVERFLOW_SHARD] = groups[OVERFLOW_SHARD]
    return ordered


def _group(values: np.ndarray) -> dict[str, np.ndarray]:
    buckets: dict[str, list[int]] = {}
    for index, value in enumerate(values):
        buckets.setdefault(str(value), []).append(index)
    return _ordered({name: np.asarray(rows, dtype=np.int64) for name, rows in buckets.items()})


def _merge_into_overflow(groups: dict[str, np.ndarray], names: list[str]) -> dict[str, np.ndarray]:
    if not names:
        return groups
    merged = [groups[name] for name in names]
    if OVERFLOW_SHARD in groups:
        merged.append(groups[OVERFLOW_SHARD])
    kept = {name: rows for name, rows in groups.items() if name not in names and name != OVERFLOW_SHARD}
    kept[OVERFLOW_SHARD] = np.sort(np.concatenate(merged))
    return _ordered(kept)


def _apply_floor(groups: dict[str, np.ndarray], min_rows: int) -> dict[str, np.ndarray]:
    rare = [name for name, rows in groups.items() if rows.size < min_rows]
    if rare:
        logger.debug("Merging %d keys with fewer than %d rows into %s", len(rare), min_rows, OVERFLOW_SHARD)
    return _merge_into_overflow(groups, rare)


def _cap(groups: dict[str, np.ndarray], n_cap: int) -> dict[str, np.ndarray]:
    if len(groups) <= n_cap:
        return groups
    named = [name for name in groups if name != OVERFLOW_SHARD]
    # Keep the n_cap - 1 largest named groups; everything else shares the overflow shard.
    return _merge_into_overflow(groups, named[n_cap - 1 :])


def _round_robin(n_rows: int, n_cap: int | None) -> dict[str, np.ndarray]:
    if n_cap is None:
        raise PartitionConfigError("by-hash partition needs a client count")
    if n_cap > n_rows:
        raise PartitionConfigError(f"cannot spread {n_rows} rows over {n_cap} non-empty clients")
    positions = np.arange(n_rows, dtype=np.int64)
    return {f"client-{index}": positions[positions % n_cap == index] for index in range(n_cap)}
