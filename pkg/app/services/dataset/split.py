from __future__ import annotations

import logging
import math

import numpy as np

from .types import Dataset

logger = logging.getLogger(__name__)


def split_train_test(data: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Shuffle with a generator seeded by ``seed`` and cut off ``floor(fraction * n)`` train rows."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train fraction must lie strictly between 0 and 1, got {train_fraction}")
    if data.n_rows == 0:
        raise ValueError("cannot split an empty dataset")
    order = np.random.default_rng(seed).permutation(data.n_rows)
    n_train = math.floor(train_fraction * data.n_rows)
    logger.debug("Split %d rows into %d train / %d test", data.n_rows, n_train, data.n_rows - n_train)
    return data.take(order[:n_train]), data.take(order[n_train:])
