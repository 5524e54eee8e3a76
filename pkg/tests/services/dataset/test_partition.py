from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.dataset.partition import OVERFLOW_SHARD, PartitionConfigError, partition_federated
from app.services.dataset.types import PartitionScheme
from tests.fakes import dataset_from


def test_by_class_builds_one_shard_per_class():
    classes = ["normal", "normal", "dos", "normal", "exploit", "dos"]
    train = dataset_from(np.linspace(0.0, 1.0, 6), classes=classes)

    federated = partition_federated(train, PartitionScheme.BY_CLASS)

    assert federated.sizes == [3, 2, 1]
    assert federated.shard_names == ("normal", "dos", "exploit")
    assert federated.scheme is PartitionScheme.BY_CLASS


def test_by_key_builds_one_shard_per_key():
    train = dataset_from(np.linspace(0.0, 1.0, 4), keys=["a", "a", "b", "b"])

    federated = partition_federated(train, "by-key", min_shard_rows=1)

    assert federated.sizes == [2, 2]
    assert federated.shard_names == ("a", "b")


def test_by_key_accepts_keys_argument():
    train = dataset_from(np.linspace(0.0, 1.0, 4))

    federated = partition_federated(train, "by-key", keys=["x", "y", "x", "x"], min_shard_rows=1)

    assert federated.shard_names == ("x", "y")
    assert federated.shards[1].row_ids.tolist() == [1]


def test_by_key_merges_rare_keys_into_overflow_shard():
    keys = ["a"] * 5 + ["b"] + ["c"] * 2
    train = dataset_from(np.linspace(0.0, 1.0, 8), keys=keys)

    federated = partition_federated(train, "by-key", min_shard_rows=3)

    assert federated.shard_names == ("a", OVERFLOW_SHARD)
    assert federated.shards[1].row_ids.tolist() == [5, 6, 7]


def test_client_cap_folds_smallest_groups_into_overflow():
    classes = ["n"] * 4 + ["d"] * 3 + ["e"] * 2 + ["w"]
    train = dataset_from(np.linspace(0.0, 1.0, 10), classes=classes)

    federated = partition_federated(train, "by-class", n_cap=2)

    assert federated.shard_names == ("n", OVERFLOW_SHARD)
    assert federated.sizes == [4, 6]


def test_by_hash_round_robin_over_cap():
    train = dataset_from(np.linspace(0.0, 1.0, 7))

    federated = partition_federated(train, PartitionScheme.BY_HASH, n_cap=3)

    assert federated.sizes == [3, 2, 2]
    assert federated.shards[0].row_ids.tolist() == [0, 3, 6]


def test_by_class_without_class_column_is_configuration_error():
    train = dataset_from(np.linspace(0.0, 1.0, 4))

    with pytest.raises(PartitionConfigError):
        partition_federated(train, PartitionScheme.BY_CLASS)


def test_by_key_without_keys_is_configuration_error():
    train = dataset_from(np.linspace(0.0, 1.0, 4))

    with pytest.raises(PartitionConfigError):
        partition_federated(train, PartitionScheme.BY_KEY)


@pytest.mark.parametrize("n_cap", [None, 0, 5])
def test_by_hash_needs_a_feasible_client_count(n_cap):
    train = dataset_from(np.linspace(0.0, 1.0, 4))

    with pytest.raises(PartitionConfigError):
        partition_federated(train, PartitionScheme.BY_HASH, n_cap=n_cap)


def test_single_class_clients_are_counted():
    train = dataset_from(
        np.linspace(0.0, 1.0, 5),
        labels=[0, 0, 1, 1, 0],
        classes=["normal", "normal", "dos", "dos", "mixed"],
    )

    federated = partition_federated(train, "by-class")

    assert federated.single_class_clients() == 3


@settings(max_examples=50, deadline=None)
@given(
    keys=st.lists(st.sampled_from(["a", "b", "c", "d", "e"]), min_size=1, max_size=40),
    scheme=st.sampled_from(list(PartitionScheme)),
    floor=st.integers(min_value=1, max_value=6),
    cap=st.integers(min_value=1, max_value=4),
)
def test_partition_is_complete_and_disjoint(keys, scheme, floor, cap):
    n_rows = len(keys)
    train = dataset_from(np.linspace(0.0, 1.0, n_rows), classes=keys, keys=keys)
    n_cap = min(cap, n_rows)

    federated = partition_federated(train, scheme, n_cap=n_cap, min_shard_rows=floor)

    ids = np.concatenate([shard.row_ids for shard in federated.shards])
    assert sorted(ids.tolist()) == train.row_ids.tolist()
    assert all(shard.n_rows > 0 for shard in federated.shards)
    assert federated.n_clients <= n_cap
