from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..dataset.types import Dataset
from ..kmeans.types import CentroidSet
from .ledger import PrivacyLedger
from .sampling import local_d2_masses


class InitStrategy(str, Enum):
    # Federated K-means++: k raw points leave the clients in total.
    FEDERATED = "federated"
    # Local K-means++ at every client, aggregated by the server: k per client.
    LOCAL = "local"


@dataclass(slots=True, eq=False)
class ClientState:
    client_id: int
    shard: Dataset
    centroids: CentroidSet | None = None
    sizes: tuple[int, ...] | None = None
    potential: float = 0.0

    def install(self, centroids: CentroidSet) -> None:
        """Adopt the global model and recompute ``Z_j`` against it."""
        self.centroids = centroids
        self.potential = float(local_d2_masses(self.shard.features, centroids).sum())


@dataclass(slots=True, eq=False)
class ServerState:
    n_clients: int
    dataset_sizes: tuple[int, ...] = ()
    centroids: CentroidSet | None = None
    potentials: list[float] = field(default_factory=list)
    round: int = 0
    k: int = 0

    @property
    def total_size(self) -> int:
        return sum(self.dataset_sizes)

    @property
    def total_potential(self) -> float:
        return float(sum(self.potentials))


@dataclass(frozen=True, slots=True, eq=False)
class FederatedRun:
    """Outcome of initialisation plus ``r`` federated rounds."""

    centroids: CentroidSet
    ledger: PrivacyLedger
    init: InitStrategy
    rounds: int
    # Global model after initialisation and after every round; len == rounds + 1.
    history: tuple[CentroidSet, ...]
    # Sum of client potentials against each model in ``history``.
    potentials: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.history) != self.rounds + 1 or len(self.potentials) != self.rounds + 1:
            raise ValueError("one model and one potential per round expected")

    @property
    def k(self) -> int:
        return self.centroids.k
