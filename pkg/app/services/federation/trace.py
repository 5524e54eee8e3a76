from __future__ import annotations

import json
from pathlib import Path
from typing import TextIO

from .ledger import PrivacyLedger
from .messages import Message


class ProtocolTrace:
    """Newline-delimited JSON record per message, with the ledger counters after it."""

    def __init__(self, stream: TextIO, ledger: PrivacyLedger, *, run: str | None = None) -> None:
        self._stream = stream
        self._ledger = ledger
        self._run = run
        self.records = 0

    def __call__(self, message: Message) -> None:
        record: dict[str, object] = {
            "seq": self.records,
            "kind": message.kind.value,
            "sender": message.sender,
            "receiver": message.receiver,
            "payload": message.summary(),
            "raw_points": self._ledger.total_raw_points,
            "incidental": self._ledger.total_incidental,
            "scalar_reports": self._ledger.scalar_reports,
        }
        if self._run is not None:
            record["run"] = self._run
        self._stream.write(json.dumps(record, sort_keys=True) + "\n")
        self.records += 1


def read_trace(path: str | Path) -> list[dict[str, object]]:
    with Path(path).open(encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
