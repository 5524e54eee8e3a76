from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator


class DatasetSchema(BaseModel):
    """Column roles of a flow-record CSV."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    label_column: str | None = "label"
    benign_value: str = "0"
    class_column: str | None = None
    key_column: str | None = None
    delimiter: str = ","
    # Identifier columns (flow ids, timestamps, addresses) that must never become features.
    drop_columns: tuple[str, ...] = Field(default_factory=tuple)

    @field_validator("delimiter")
    @classmethod
    def _single_character(cls, value: str) -> str:
        if len(value) != 1:
            raise ValueError("delimiter must be a single character")
        return value

    @field_validator("benign_value")
    @classmethod
    def _strip(cls, value: str) -> str:
        return value.strip()
