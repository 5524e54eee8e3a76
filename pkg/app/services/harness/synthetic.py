"""Gaussian-blob flow records with planted labels.

Blob 0 is benign traffic, every other blob an attack family. Each row also gets
a destination host so the by-key partition has something to group on.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from ..dataset.types import Dataset, Label, RawTable
from .config import SyntheticConfig

DEFAULT_CENTERS: tuple[tuple[float, float], ...] = ((0.2, 0.2), (0.8, 0.2), (0.5, 0.8))
CLASS_NAMES = ("normal", "dos", "exploits", "recon", "worms")
HOSTS = ("10.0.0.1", "10.0.0.2", "10.0.0.3", "10.0.0.4")


def make_blobs(
    config: SyntheticConfig,
    centers: tuple[tuple[float, ...], ...] = DEFAULT_CENTERS,
) -> pd.DataFrame:
    """One row per flow: feature columns ``f0..``, ``label``, ``attack_cat``, ``dst_ip``."""
    if not 1 <= len(centers) <= len(CLASS_NAMES):
        raise ValueError(f"between 1 and {len(CLASS_NAMES)} blobs supported")
    rng = np.random.default_rng(config.seed)
    dim = len(centers[0])
    blobs = np.repeat(np.arange(len(centers)), config.rows_per_blob)
    means = np.asarray(centers, dtype=np.float64)[blobs]
    points = np.clip(means + rng.normal(0.0, config.spread, size=means.shape), 0.0, 1.0)

    frame = pd.DataFrame(points, columns=[f"f{i}" for i in range(dim)])
    frame["label"] = np.where(blobs == 0, Label.BENIGN.value, Label.ATTACK.value).astype(str)
    frame["attack_cat"] = [CLASS_NAMES[blob] for blob in blobs]
    frame["dst_ip"] = rng.choice(HOSTS, size=blobs.size)
    return frame


def synthetic_table(config: SyntheticConfig) -> RawTable:
    return RawTable(
        frame=make_blobs(config),
        label_column="label",
        benign_value=str(Label.BENIGN.value),
        class_column="attack_cat",
        key_column="dst_ip",
    )


def blob_dataset(
    config: SyntheticConfig,
    centers: tuple[tuple[float, ...], ...] = DEFAULT_CENTERS,
) -> Dataset:
    """The blobs as a ready Dataset, in their original coordinates."""
    frame = make_blobs(config, centers)
    features = frame.filter(regex=r"^f\d+$")
    return Dataset(
        features=features.to_numpy(dtype=np.float64),
        row_ids=np.arange(len(frame), dtype=np.int64),
        feature_names=tuple(features.columns),
        labels=frame["label"].astype(int).to_numpy(dtype=np.int8),
        classes=frame["attack_cat"].to_numpy(dtype=object),
        keys=frame["dst_ip"].to_numpy(dtype=object),
    )
