from __future__ import annotations

import numpy as np
import pytest

from app.services.dataset.split import split_train_test
from tests.fakes import dataset_from


def _ten_rows():
    return dataset_from(np.linspace(0.0, 1.0, 10), labels=[0, 1] * 5)


def test_split_sizes_are_floor_of_fraction():
    train, test = split_train_test(_ten_rows(), 0.8, seed=7)

    assert train.n_rows == 8
    assert test.n_rows == 2
    ids = np.concatenate([train.row_ids, test.row_ids])
    assert sorted(ids.tolist()) == list(range(10))


def test_split_is_deterministic_per_seed():
    first = split_train_test(_ten_rows(), 0.8, seed=7)
    second = split_train_test(_ten_rows(), 0.8, seed=7)

    assert first[0].row_ids.tolist() == second[0].row_ids.tolist()
    assert first[1].row_ids.tolist() == second[1].row_ids.tolist()


def test_split_rows_keep_their_labels():
    data = _ten_rows()
    train, _ = split_train_test(data, 0.5, seed=3)

    assert train.labels is not None
    for row_id, label in zip(train.row_ids, train.labels):
        assert label == data.labels[row_id]


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.5, 1.5])
def test_split_rejects_fraction_outside_open_interval(fraction):
    with pytest.raises(ValueError):
        split_train_test(_ten_rows(), fraction, seed=7)
