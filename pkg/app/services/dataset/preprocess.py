"""Flow-record preprocessing.

Steps, in order: drop incomplete rows, clamp infinities to the column's finite
extrema, one-hot encode categorical columns, min-max normalise to [0, 1], drop
near-constant features by value frequency, drop redundant rows.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import pandas as pd

from .types import Dataset, Label, RawTable

logger = logging.getLogger(__name__)

DEFAULT_SELECTION_THRESHOLD = 0.99
ONE_HOT_SEPARATOR = "="


class EmptyDatasetError(ValueError):
    """Raised when preprocessing leaves no rows or no features."""


def preprocess(
    table: RawTable,
    selection_threshold: float = DEFAULT_SELECTION_THRESHOLD,
) -> Dataset:
    if not 0.0 <= selection_threshold <= 1.0:
        raise ValueError(f"selection threshold must lie in [0, 1], got {selection_threshold}")
    feature_columns = table.feature_columns
    if not feature_columns:
        raise EmptyDatasetError("table has no feature columns")

    frame = table.frame.loc[table.frame.notna().all(axis=1)]
    dropped = len(table.frame) - len(frame)
    if frame.empty:
        raise EmptyDatasetError("no rows left after removing rows with missing values")
    if dropped:
        logger.debug("Dropped %d rows with missing values", dropped)

    numeric_columns, categorical_columns = _split_column_kinds(frame[feature_columns])
    numeric = _replace_infinities(frame[numeric_columns])
    encoded = _one_hot(frame[categorical_columns])
    features = pd.concat([numeric, encoded], axis=1)

    features = _min_max_normalise(features)
    features = _select_by_value_frequency(features, selection_threshold)
    if features.shape[1] == 0:
        raise EmptyDatasetError("no feature survived value-frequency selection")

    labels = _labels(frame, table)
    keep = _non_redundant_rows(features, labels)
    features = features.loc[keep]
    frame = frame.loc[keep]
    if labels is not None:
        labels = labels[keep.to_numpy()]

    logger.info(
        "Preprocessed %d rows into %d rows x %d features",
        len(table.frame),
        len(features),
        features.shape[1],
    )
    return Dataset(
        features=features.to_numpy(dtype=np.float64),
        row_ids=frame.index.to_numpy(dtype=np.int64),
        feature_names=tuple(str(column) for column in features.columns),
        labels=labels,
        classes=_role_values(frame, table.class_column),
        keys=_role_values(frame, table.key_column),
    )


def _split_column_kinds(frame: pd.DataFrame) -> tuple[list[str], list[str]]:
    numeric: list[str] = []
    categorical: list[str] = []
    for column in frame.columns:
        if all(isinstance(value, float) for value in frame[column]):
            numeric.append(column)
        else:
            categorical.append(column)
    return numeric, categorical


def _replace_infinities(frame: pd.DataFrame) -> pd.DataFrame:
    out = {}
    for column in frame.columns:
        values = frame[column].to_numpy(dtype=np.float64)
        finite = values[np.isfinite(values)]
        if finite.size == 0:
            # Nothing to clamp to: the column is constant (all one infinity) and gets dropped.
            out[column] = np.zeros_like(values)
            continue
        values = np.where(values == math.inf, finite.max(), values)
        values = np.where(values == -math.inf, finite.min(), values)
        out[column] = values
    return pd.DataFrame(out, index=frame.index, columns=list(frame.columns), dtype=np.float64)


def _categorical_text(value: object) -> str:
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def _one_hot(frame: pd.DataFrame) -> pd.DataFrame:
    if frame.shape[1] == 0:
        return pd.DataFrame(index=frame.index)
    text = frame.apply(lambda column: column.map(_categorical_text))
    return pd.get_dummies(text, prefix_sep=ONE_HOT_SEPARATOR, dtype=np.float64)


def _min_max_normalise(features: pd.DataFrame) -> pd.DataFrame:
    lows = features.min()
    highs = features.max()
    span = highs - lows
    constant = span[span == 0].index
    if len(constant):
        logger.debug("Dropping %d constant columns", len(constant))
    features = features.drop(columns=constant)
    span = span.drop(index=constant)
    lows = lows.drop(index=constant)
    return ((features - lows) / span).clip(lower=0.0, upper=1.0)


def _select_by_value_frequency(features: pd.DataFrame, threshold: float) -> pd.DataFrame:
    if features.empty:
        return features
    dominant_share = features.apply(lambda column: column.value_counts(normalize=True).iloc[0])
    dropped = dominant_share[dominant_share >= threshold].index
    if len(dropped):
        logger.debug("Value-frequency selection dropped %s", list(dropped))
    return features.drop(columns=dropped)


def _labels(frame: pd.DataFrame, table: RawTable) -> np.ndarray | None:
    if table.label_column is None:
        return None
    benign = table.benign_value
    values = frame[table.label_column].to_numpy()
    return np.array(
        [Label.BENIGN if str(value) == benign else Label.ATTACK for value in values],
        dtype=np.int8,
    )


def _non_redundant_rows(features: pd.DataFrame, labels: np.ndarray | None) -> pd.Series:
    subset = features.copy()
    if labels is not None:
        # Conflicting duplicates keep one row per label value.
        subset["__label__"] = labels
    return ~subset.duplicated(keep="first")


def _role_values(frame: pd.DataFrame, column: str | None) -> np.ndarray | None:
    if column is None:
        return None
    return frame[column].astype(str).to_numpy(dtype=object)
