"""Federated K-means driven over an asyncio federation of client tasks.

Usage::

    async with Federation.from_shards(federated.shards, seed=7) as federation:
        run = await run_federated_kmeans(federation, k=8, r=3)
"""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Iterable, Sequence
from types import TracebackType

from ...utils.seeding import party_generators
from ..dataset.types import Dataset, FederatedDataset
from ..kmeans.types import CentroidSet
from .client import FederatedClient
from .ledger import PrivacyLedger
from .metrics import METRIC_ROUNDS
from .server import FederatedServer, ProtocolError
from .transport import MailboxTransport, MessageListener, Transport
from .types import FederatedRun, InitStrategy, ServerState

logger = logging.getLogger(__name__)


class Federation:
    """One server and one task per client sharing a transport and a privacy ledger."""

    def __init__(
        self,
        shards: Sequence[Dataset],
        *,
        seed: int,
        transport: Transport | None = None,
        listeners: Iterable[MessageListener] = (),
    ) -> None:
        if not shards:
            raise ValueError("a federation needs at least one shard")
        if any(shard.n_rows == 0 for shard in shards):
            raise ValueError("every shard must be non-empty")
        self.seed = seed
        self.transport: Transport = transport or MailboxTransport()
        self.ledger = PrivacyLedger()
        self.transport.subscribe(self.ledger.record)
        for listener in listeners:
            self.transport.subscribe(listener)

        server_rng, client_rngs = party_generators(seed, len(shards))
        self.server = FederatedServer(self.transport, len(shards), server_rng)
        self.clients = [
            FederatedClient(client_id, shard, self.transport, rng)
            for client_id, (shard, rng) in enumerate(zip(shards, client_rngs))
        ]
        self._tasks: list[asyncio.Task[None]] = []

    @classmethod
    def from_shards(
        cls,
        shards: FederatedDataset | Sequence[Dataset],
        *,
        seed: int,
        transport: Transport | None = None,
        listeners: Iterable[MessageListener] = (),
    ) -> "Federation":
        if isinstance(shards, FederatedDataset):
            shards = shards.shards
        return cls(list(shards), seed=seed, transport=transport, listeners=listeners)

    @property
    def n_clients(self) -> int:
        return len(self.clients)

    @property
    def state(self) -> ServerState:
        return self.server.state

    @property
    def running(self) -> bool:
        return bool(self._tasks)

    async def __aenter__(self) -> "Federation":
        self._tasks = [
            asyncio.create_task(client.serve(), name=f"fed-client-{client.client_id}")
            for client in self.clients
        ]
        try:
            await self.server.open_session()
        except BaseException:
            await self._stop()
            raise
        return self

    async def __aexit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        await self._stop()

    async def _stop(self) -> None:
        if not self._tasks:
            return
        await self.server.shutdown()
        await asyncio.gather(*self._tasks, return_exceptions=True)
        self._tasks = []

    def require_running(self) -> None:
        if not self._tasks:
            raise ProtocolError("federation is not running; use 'async with'")


async def fed_kmeanspp_init(federation: Federation, k: int) -> tuple[CentroidSet, PrivacyLedger]:
    federation.require_running()
    centroids = await federation.server.kmeanspp_init(k)
    return centroids, federation.ledger.copy()


async def local_kmeanspp_init(federation: Federation, k: int) -> tuple[CentroidSet, PrivacyLedger]:
    federation.require_running()
    centroids = await federation.server.local_kmeanspp_init(k)
    return centroids, federation.ledger.copy()


async def fed_kmeans_round(federation: Federation) -> ServerState:
    federation.require_running()
    await federation.server.run_round()
    METRIC_ROUNDS.inc()
    return federation.state


async def run_federated_kmeans(
    federation: Federation,
    k: int,
    r: int,
    *,
    init: InitStrategy = InitStrategy.FEDERATED,
) -> FederatedRun:
    """Initialise, then run exactly ``r`` rounds.

    With the federated initialisation ``r = 0`` returns the K-means++ centroids as
    they are; with the local one it returns the single aggregation of local seeds.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    federation.require_running()
    server = federation.server
    if init is InitStrategy.FEDERATED:
        centroids = await server.kmeanspp_init(k)
    else:
        centroids = await server.local_kmeanspp_init(k)

    history = [centroids]
    potentials = [sum(await server.collect_potentials(centroids))]
    for _ in range(r):
        centroids = await server.run_round()
        METRIC_ROUNDS.inc()
        history.append(centroids)
        potentials.append(sum(await server.collect_potentials(centroids)))
        logger.debug("Round %d potential %.6f", server.state.round, potentials[-1])

    return FederatedRun(
        centroids=centroids,
        ledger=federation.ledger.copy(),
        init=init,
        rounds=r,
        history=tuple(history),
        potentials=tuple(float(value) for value in potentials),
    )
