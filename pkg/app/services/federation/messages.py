from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..kmeans.distance import Metric

SERVER_ID = -1


class InvalidMessageError(ValueError):
    """Raised when a message payload does not match its kind."""


class MessageKind(str, Enum):
    SESSION_OPEN = "SessionOpen"
    SIZE_REPORT = "SizeReport"
    GLOBAL_MODEL = "GlobalModel"
    POTENTIAL_REPORT = "PotentialReport"
    SAMPLE_REQUEST = "SampleRequest"
    CENTROID_REVEAL = "CentroidReveal"
    LOCAL_UPDATE = "LocalUpdate"
    VOTE_REPORT = "VoteReport"
    SILHOUETTE_REPORT = "SilhouetteReport"
    CLIENT_ERROR = "ClientError"
    SHUTDOWN = "Shutdown"


class SampleMode(str, Enum):
    UNIFORM = "uniform"
    D2 = "d2"
    # Local K-means++ seeds, as in the Garst & Reinders initialisation.
    LOCAL_SEEDS = "local-seeds"


# Client replies that carry aggregate statistics rather than data.
SCALAR_REPORTS = frozenset(
    {
        MessageKind.SIZE_REPORT,
        MessageKind.POTENTIAL_REPORT,
        MessageKind.VOTE_REPORT,
        MessageKind.SILHOUETTE_REPORT,
    }
)


@dataclass(frozen=True, slots=True)
class SessionOpen:
    pass


@dataclass(frozen=True, slots=True)
class SizeReport:
    sizes: tuple[int, ...]


@dataclass(frozen=True, slots=True, eq=False)
class GlobalModel:
    centroids: np.ndarray
    # Report the server expects back; None only installs the model.
    reply: MessageKind | None = None
    # Distance used for SilhouetteReport replies.
    metric: Metric = Metric.SQUARED_EUCLIDEAN


@dataclass(frozen=True, slots=True)
class PotentialReport:
    potential: float


@dataclass(frozen=True, slots=True)
class SampleRequest:
    mode: SampleMode
    count: int = 1


@dataclass(frozen=True, slots=True, eq=False)
class CentroidReveal:
    vector: np.ndarray


@dataclass(frozen=True, slots=True, eq=False)
class LocalUpdate:
    centroids: np.ndarray
    sizes: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class VoteReport:
    benign_fractions: tuple[float | None, ...]
    sizes: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SilhouetteReportPayload:
    mean: float
    count: int


@dataclass(frozen=True, slots=True)
class ClientError:
    reason: str


@dataclass(frozen=True, slots=True)
class Shutdown:
    pass


Payload = Union[
    SessionOpen,
    SizeReport,
    GlobalModel,
    PotentialReport,
    SampleRequest,
    CentroidReveal,
    LocalUpdate,
    VoteReport,
    SilhouetteReportPayload,
    ClientError,
    Shutdown,
]

_PAYLOAD_TYPES: dict[MessageKind, type] = {
    MessageKind.SESSION_OPEN: SessionOpen,
    MessageKind.SIZE_REPORT: SizeReport,
    MessageKind.GLOBAL_MODEL: GlobalModel,
    MessageKind.POTENTIAL_REPORT: PotentialReport,
    MessageKind.SAMPLE_REQUEST: SampleRequest,
    MessageKind.CENTROID_REVEAL: CentroidReveal,
    MessageKind.LOCAL_UPDATE: LocalUpdate,
    MessageKind.VOTE_REPORT: VoteReport,
    MessageKind.SILHOUETTE_REPORT: SilhouetteReportPayload,
    MessageKind.CLIENT_ERROR: ClientError,
    MessageKind.SHUTDOWN: Shutdown,
}


def kind_of(payload: Payload) -> MessageKind:
    for kind, payload_type in _PAYLOAD_TYPES.items():
        if isinstance(payload, payload_type):
            return kind
    raise InvalidMessageError(f"unknown payload type {type(payload).__name__}")


@dataclass(frozen=True, slots=True, eq=False)
class Message:
    kind: MessageKind
    sender: int
    receiver: int
    payload: Payload

    def __post_init__(self) -> None:
        expected = _PAYLOAD_TYPES[self.kind]
        if not isinstance(self.payload, expected):
            raise InvalidMessageError(
                f"{self.kind.value} expects {expected.__name__}, got {type(self.payload).__name__}"
            )
        if isinstance(self.payload, CentroidReveal) and np.asarray(self.payload.vector).ndim != 1:
            raise InvalidMessageError("CentroidReveal carries exactly one feature vector")
        if isinstance(self.payload, LocalUpdate):
            rows = np.asarray(self.payload.centroids).shape[0]
            if rows != len(self.payload.sizes):
                raise InvalidMessageError("LocalUpdate needs one size per centroid")

    @classmethod
    def build(cls, sender: int, receiver: int, payload: Payload) -> "Message":
        return cls(kind=kind_of(payload), sender=sender, receiver=receiver, payload=payload)

    def summary(self) -> dict[str, object]:
        """Shape-level description of the payload, never the values of data vectors."""
        payload = self.payload
        if isinstance(payload, GlobalModel):
            return {
                "centroids": list(np.asarray(payload.centroids).shape),
                "reply": payload.reply.value if payload.reply else None,
            }
        if isinstance(payload, CentroidReveal):
            return {"dim": int(np.asarray(payload.vector).shape[0])}
        if isinstance(payload, LocalUpdate):
            return {"centroids": len(payload.sizes), "sizes": list(payload.sizes)}
        if isinstance(payload, SizeReport):
            return {"sizes": list(payload.sizes)}
        if isinstance(payload, PotentialReport):
            return {"potential": payload.potential}
        if isinstance(payload, SampleRequest):
            return {"mode": payload.mode.value, "count": payload.count}
        if isinstance(payload, VoteReport):
            return {"clusters": len(payload.sizes), "members": int(sum(payload.sizes))}
        if isinstance(payload, SilhouetteReportPayload):
            return {"mean": payload.mean, "count": payload.count}
        if isinstance(payload, ClientError):
            return {"reason": payload.reason}
        return {}
