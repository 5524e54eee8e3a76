from __future__ import annotations

import pytest

from app.services.dataset.partition import partition_federated
from app.services.dataset.types import Dataset, FederatedDataset, PartitionScheme
from app.services.harness.config import SyntheticConfig
from app.services.harness.synthetic import blob_dataset


@pytest.fixture
def blobs() -> Dataset:
    """150 points in three well-separated 2-D blobs; blob 0 is benign."""
    return blob_dataset(SyntheticConfig(rows_per_blob=50, spread=0.03, seed=11))


@pytest.fixture
def blob_shards(blobs: Dataset) -> FederatedDataset:
    return partition_federated(blobs, PartitionScheme.BY_HASH, n_cap=3)
