from __future__ import annotations

from pathlib import Path

import numpy as np
from prometheus_client import CollectorRegistry, Counter, generate_latest

from .messages import LocalUpdate, Message, MessageKind

registry = CollectorRegistry()
METRIC_MESSAGES = Counter(
    "fedkmeans_messages_total", "Protocol messages sent", ["kind"], registry=registry
)
METRIC_RAW_POINTS = Counter(
    "fedkmeans_raw_points_disclosed_total", "Raw points revealed as centroids", registry=registry
)
METRIC_INCIDENTAL = Counter(
    "fedkmeans_incidental_disclosures_total",
    "Local centroids of singleton clusters",
    registry=registry,
)
METRIC_ROUNDS = Counter("fedkmeans_rounds_total", "Federated rounds aggregated", registry=registry)
METRIC_COMBINATIONS = Counter(
    "fedkmeans_sweep_combinations_total",
    "Sweep combinations evaluated",
    ["status"],
    registry=registry,
)


def observe_message(message: Message) -> None:
    """Transport listener feeding the protocol counters."""
    METRIC_MESSAGES.labels(kind=message.kind.value).inc()
    if message.kind is MessageKind.CENTROID_REVEAL:
        METRIC_RAW_POINTS.inc()
    elif isinstance(message.payload, LocalUpdate):
        singletons = int((np.asarray(message.payload.sizes) == 1).sum())
        if singletons:
            METRIC_INCIDENTAL.inc(singletons)


def write_metrics(path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(generate_latest(registry))
    return target
