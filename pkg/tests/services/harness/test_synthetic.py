from __future__ import annotations

import numpy as np

from app.services.harness.config import SyntheticConfig
from app.services.harness.synthetic import (
    DEFAULT_CENTERS,
    blob_dataset,
    make_blobs,
    synthetic_table,
)


def test_blobs_have_planted_labels():
    frame = make_blobs(SyntheticConfig(rows_per_blob=20, seed=1))

    assert list(frame.columns) == ["f0", "f1", "label", "attack_cat", "dst_ip"]
    assert len(frame) == 60
    assert frame["label"].value_counts().to_dict() == {"1": 40, "0": 20}
    assert set(frame.loc[frame["label"] == "0", "attack_cat"]) == {"normal"}


def test_blobs_stay_in_the_unit_square():
    frame = make_blobs(SyntheticConfig(rows_per_blob=200, spread=0.5, seed=2))

    values = frame[["f0", "f1"]].to_numpy()
    assert values.min() >= 0.0
    assert values.max() <= 1.0


def test_blob_means_are_close_to_their_centers():
    data = blob_dataset(SyntheticConfig(rows_per_blob=100, spread=0.03, seed=3))

    for blob, center in enumerate(DEFAULT_CENTERS):
        rows = data.features[blob * 100 : (blob + 1) * 100]
        np.testing.assert_allclose(rows.mean(axis=0), center, atol=0.01)


def test_same_seed_same_blobs():
    config = SyntheticConfig(rows_per_blob=5, seed=4)

    assert make_blobs(config).equals(make_blobs(config))


def test_synthetic_table_declares_roles():
    table = synthetic_table(SyntheticConfig(rows_per_blob=5))

    assert table.feature_columns == ["f0", "f1"]
    assert table.role_columns == ["label", "attack_cat", "dst_ip"]
    assert len(table) == 15
