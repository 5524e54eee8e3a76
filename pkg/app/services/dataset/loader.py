from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import pandas as pd

from .schema import DatasetSchema
from .types import Cell, Dataset, RawTable

logger = logging.getLogger(__name__)

_MISSING = frozenset({"", "nan", "na", "n/a", "null", "none", "?"})
_POSITIVE_INFINITY = frozenset({"inf", "+inf", "infinity", "+infinity"})
_NEGATIVE_INFINITY = frozenset({"-inf", "-infinity"})


class MalformedInputError(ValueError):
    """Raised when a CSV file cannot be parsed into a rectangular table."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SchemaError(ValueError):
    """Raised when a column declared in the schema is absent from the header."""

    def __init__(self, column: str) -> None:
        super().__init__(f"declared column {column!r} is missing from the header")
        self.column = column


def parse_cell(raw: str) -> Cell:
    text = raw.strip()
    lowered = text.lower()
    if lowered in _MISSING:
        return None
    if lowered in _POSITIVE_INFINITY:
        return math.inf
    if lowered in _NEGATIVE_INFINITY:
        return -math.inf
    try:
        return float(text)
    except ValueError:
        return text


def _parse_role_cell(raw: str) -> str | None:
    text = raw.strip()
    return None if text == "" else text


def _read_records(path: Path, delimiter: str) -> tuple[list[str], list[list[str]]]:
    """Header and data records; every record must have exactly as many fields as the header."""
    records: list[list[str]] = []
    try:
        with path.open(encoding="utf-8-sig", newline="") as handle:
            reader = csv.reader(handle, delimiter=delimiter)
            header = next(reader, None)
            if not header:
                raise MalformedInputError("file has no header", line=1)
            for record in reader:
                if not record:
                    continue
                if len(record) != len(header):
                    raise MalformedInputError(
                        f"expected {len(header)} fields, found {len(record)}", line=reader.line_num
                    )
                records.append(record)
    except csv.Error as exc:
        raise MalformedInputError(str(exc), line=reader.line_num) from exc
    except UnicodeDecodeError as exc:
        raise MalformedInputError(f"{path}: not valid UTF-8: {exc.reason}") from exc
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return [column.strip() for column in header], records


def load_csv(path: str | Path, schema: DatasetSchema) -> RawTable:
    path = Path(path)
    header, records = _read_records(path, schema.delimiter)
    frame = pd.DataFrame(records, columns=header, dtype=str)

    roles = [schema.label_column, schema.class_column, schema.key_column, *schema.drop_columns]
    for column in roles:
        if column is not None and column not in frame.columns:
            raise SchemaError(column)

    frame = frame.drop(columns=list(schema.drop_columns))
    role_columns = {c for c in (schema.label_column, schema.class_column, schema.key_column) if c}
    parsed = pd.DataFrame(index=pd.RangeIndex(len(frame)))
    for column in frame.columns:
        parser = _parse_role_cell if column in role_columns else parse_cell
        parsed[column] = frame[column].map(parser).astype(object)

    logger.info("Loaded %s: %d rows, %d columns", path, len(parsed), len(parsed.columns))
    return RawTable(
        frame=parsed,
        label_column=schema.label_column,
        benign_value=schema.benign_value,
        class_column=schema.class_column,
        key_column=schema.key_column,
    )


def table_from_dataset(dataset: Dataset) -> RawTable:
    """Wrap a preprocessed dataset back into a table (used to re-run preprocessing)."""
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names)).astype(object)
    label_column = None
    if dataset.labels is not None:
        label_column = "__label__"
        frame[label_column] = ["attack" if value else "benign" for value in dataset.labels]
    class_column = None
    if dataset.classes is not None:
        class_column = "__class__"
        frame[class_column] = [str(value) for value in dataset.classes]
    key_column = None
    if dataset.keys is not None:
        key_column = "__key__"
        frame[key_column] = [str(value) for value in dataset.keys]
    frame.index = pd.Index(dataset.row_ids)
    return RawTable(
        frame=frame,
        label_column=label_column,
        benign_value="benign",
        class_column=class_column,
        key_column=key_column,
    )


def dump_dataset(dataset: Dataset, path: str | Path) -> Path:
    path = Path(path)
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
    frame.insert(0, "row_id", dataset.row_ids)
    if dataset.labels is not None:
        frame["label"] = ["attack" if value else "benign" for value in dataset.labels]
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
