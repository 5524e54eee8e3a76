from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .messages import SCALAR_REPORTS, LocalUpdate, Message, MessageKind


@dataclass(slots=True)
class PrivacyLedger:
    """Audit of what clients disclosed over the wire.

    Raw points only move on ``CentroidReveal``. A ``LocalUpdate`` centroid of a
    singleton cluster is a raw point as well; those are tracked separately as
    incidental disclosures.
    """

    raw_points: Counter[int] = field(default_factory=Counter)
    incidental: Counter[int] = field(default_factory=Counter)
    scalar_reports: int = 0
    messages: Counter[MessageKind] = field(default_factory=Counter)

    def record(self, message: Message) -> None:
        self.messages[message.kind] += 1
        if message.kind is MessageKind.CENTROID_REVEAL:
            self.raw_points[message.sender] += 1
        elif isinstance(message.payload, LocalUpdate):
            singletons = int((np.asarray(message.payload.sizes) == 1).sum())
            if singletons:
                self.incidental[message.sender] += singletons
        elif message.kind in SCALAR_REPORTS:
            self.scalar_reports += 1

    @property
    def total_raw_points(self) -> int:
        return sum(self.raw_points.values())

    @property
    def total_incidental(self) -> int:
        return sum(self.incidental.values())

    def copy(self) -> "PrivacyLedger":
        return PrivacyLedger(
            raw_points=Counter(self.raw_points),
            incidental=Counter(self.incidental),
            scalar_reports=self.scalar_reports,
            messages=Counter(self.messages),
        )

    def summary(self) -> dict[str, object]:
        return {
            "raw_points": self.total_raw_points,
            "raw_points_per_client": {str(k): v for k, v in sorted(self.raw_points.items())},
            "incidental_disclosures": self.total_incidental,
            "scalar_reports": self.scalar_reports,
            "messages": {kind.value: count for kind, count in sorted(self.messages.items())},
        }
