from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from ...utils.seeding import sample_index
from ..classifier import ClusterVote, VoteTable, aggregate_votes
from ..kmeans.distance import Metric
from ..kmeans.lloyd import fit_kmeans
from ..kmeans.types import CentroidSet, InfeasibleClusteringError
from ..silhouette import SilhouetteReport, UndefinedSilhouetteError, federated_silhouette
from .messages import (
    SERVER_ID,
    CentroidReveal,
    ClientError,
    GlobalModel,
    LocalUpdate,
    Message,
    MessageKind,
    Payload,
    PotentialReport,
    SampleMode,
    SampleRequest,
    SessionOpen,
    Shutdown,
    SilhouetteReportPayload,
    SizeReport,
    VoteReport,
)
from .sampling import client_selection_masses
from .transport import Transport
from .types import ServerState

logger = logging.getLogger(__name__)


class ProtocolError(RuntimeError):
    """Raised when a party sends something the protocol does not allow at this point."""


class ClientFailedError(ProtocolError):
    """Raised when a client reports a failure instead of the expected reply."""

    def __init__(self, client_id: int, reason: str) -> None:
        super().__init__(f"client {client_id} failed: {reason}")
        self.client_id = client_id
        self.reason = reason


class FederatedServer:
    """Sequential orchestrator. Holds sizes, potentials and centroids, never shard rows."""

    def __init__(self, transport: Transport, n_clients: int, rng: np.random.Generator) -> None:
        if n_clients < 1:
            raise ValueError("a federation needs at least one client")
        self.state = ServerState(n_clients=n_clients)
        self._transport = transport
        self._rng = rng

    @property
    def clients(self) -> range:
        return range(self.state.n_clients)

    async def _send(self, receiver: int, payload: Payload) -> None:
        await self._transport.send(Message.build(SERVER_ID, receiver, payload))

    async def _broadcast(self, payload: Payload) -> None:
        for client in self.clients:
            await self._send(client, payload)

    async def _receive(self, client: int, expected: MessageKind) -> Payload:
        message = await self._transport.receive(SERVER_ID, client)
        if isinstance(message.payload, ClientError):
            raise ClientFailedError(client, message.payload.reason)
        if message.kind is not expected:
            raise ProtocolError(
                f"expected {expected.value} from client {client}, got {message.kind.value}"
            )
        return message.payload

    async def _collect(self, expected: MessageKind) -> list[Payload]:
        """One reply per client in client order; every reply is drained before failing."""
        replies: list[Payload] = []
        failure: ProtocolError | None = None
        for client in self.clients:
            try:
                replies.append(await self._receive(client, expected))
            except ProtocolError as exc:
                failure = failure or exc
        if failure is not None:
            raise failure
        return replies

    async def open_session(self) -> tuple[int, ...]:
        await self._broadcast(SessionOpen())
        reports = await self._collect(MessageKind.SIZE_REPORT)
        sizes = tuple(report.sizes[0] for report in reports if isinstance(report, SizeReport))
        self.state.dataset_sizes = sizes
        logger.debug("Session open: %d clients, sizes=%s", len(sizes), sizes)
        return sizes

    async def _model_query(
        self,
        centroids: CentroidSet,
        reply: MessageKind,
        metric: Metric = Metric.SQUARED_EUCLIDEAN,
    ) -> list[Payload]:
        await self._broadcast(GlobalModel(centroids=centroids.vectors, reply=reply, metric=metric))
        return await self._collect(reply)

    async def collect_potentials(self, centroids: CentroidSet) -> list[float]:
        reports = await self._model_query(centroids, MessageKind.POTENTIAL_REPORT)
        potentials = [r.potential for r in reports if isinstance(r, PotentialReport)]
        self.state.potentials = potentials
        return potentials

    async def _reveal(self, client: int, mode: SampleMode) -> np.ndarray:
        await self._send(client, SampleRequest(mode=mode))
        payload = await self._receive(client, MessageKind.CENTROID_REVEAL)
        assert isinstance(payload, CentroidReveal)
        return np.asarray(payload.vector, dtype=np.float64)

    async def kmeanspp_init(self, k: int) -> CentroidSet:
        """Federated K-means++: k reveals, each from a client drawn by size or potential."""
        if k < 1:
            raise ValueError("k must be at least 1")
        state = self.state
        if state.total_size < k:
            raise InfeasibleClusteringError(f"k={k} exceeds the {state.total_size} pooled rows")
        state.k = k

        client = sample_index(self._rng, client_selection_masses(state.dataset_sizes))
        chosen = [await self._reveal(client, SampleMode.UNIFORM)]
        while len(chosen) < k:
            centroids = CentroidSet(np.vstack(chosen))
            potentials = await self.collect_potentials(centroids)
            if not state.total_potential > 0.0:
                raise InfeasibleClusteringError(
                    f"no potential left after {len(chosen)} of {k} centroids"
                )
            client = sample_index(self._rng, client_selection_masses(potentials))
            chosen.append(await self._reveal(client, SampleMode.D2))

        state.centroids = CentroidSet(np.vstack(chosen))
        await self._broadcast(GlobalModel(centroids=state.centroids.vectors))
        logger.debug("Federated K-means++ placed %d centroids", k)
        return state.centroids

    async def local_kmeanspp_init(self, k: int) -> CentroidSet:
        """Every client seeds K-means++ locally and reveals its seeds; one weighted aggregation."""
        if k < 1:
            raise ValueError("k must be at least 1")
        if self.state.total_size < k:
            raise InfeasibleClusteringError(f"k={k} exceeds the {self.state.total_size} pooled rows")
        self.state.k = k
        await self._broadcast(SampleRequest(mode=SampleMode.LOCAL_SEEDS, count=k))
        vectors: list[np.ndarray] = []
        weights: list[int] = []
        failure: ProtocolError | None = None
        for client in self.clients:
            try:
                report = await self._receive(client, MessageKind.SIZE_REPORT)
            except ProtocolError as exc:
                failure = failure or exc
                continue
            assert isinstance(report, SizeReport)
            for size in report.sizes:
                reveal = await self._receive(client, MessageKind.CENTROID_REVEAL)
                assert isinstance(reveal, CentroidReveal)
                vectors.append(np.asarray(reveal.vector, dtype=np.float64))
                weights.append(size)
        if failure is not None:
            raise failure
        return await self._aggregate(np.vstack(vectors), np.asarray(weights, dtype=np.float64))

    async def _aggregate(self, points: np.ndarray, weights: np.ndarray) -> CentroidSet:
        run = fit_kmeans(points, self.state.k, self._rng, weights=weights, allow_fewer=True)
        if run.centroids.k < self.state.k:
            logger.debug(
                "Aggregation kept %d of %d centroids from %d received",
                run.centroids.k,
                self.state.k,
                points.shape[0],
            )
        self.state.centroids = run.centroids
        await self._broadcast(GlobalModel(centroids=run.centroids.vectors))
        return run.centroids

    async def run_round(self) -> CentroidSet:
        state = self.state
        if state.centroids is None:
            raise ProtocolError("a round needs a global model; initialise first")
        updates = await self._model_query(state.centroids, MessageKind.LOCAL_UPDATE)
        local = [update for update in updates if isinstance(update, LocalUpdate)]
        points = np.vstack([update.centroids for update in local])
        weights = np.concatenate([np.asarray(update.sizes, dtype=np.float64) for update in local])
        centroids = await self._aggregate(points, weights)
        state.round += 1
        logger.debug("Round %d aggregated %d local centroids", state.round, points.shape[0])
        return centroids

    async def silhouette(
        self,
        centroids: CentroidSet,
        metric: Metric = Metric.SQUARED_EUCLIDEAN,
    ) -> SilhouetteReport:
        if centroids.k < 2:
            raise UndefinedSilhouetteError("simplified silhouette needs at least two centroids")
        reports = await self._model_query(centroids, MessageKind.SILHOUETTE_REPORT, metric)
        pairs = [(r.mean, r.count) for r in reports if isinstance(r, SilhouetteReportPayload)]
        return SilhouetteReport(
            client_means=tuple(mean for mean, _ in pairs),
            client_counts=tuple(count for _, count in pairs),
            score=federated_silhouette(pairs),
        )

    async def votes(self, centroids: CentroidSet) -> VoteTable:
        reports = await self._model_query(centroids, MessageKind.VOTE_REPORT)
        tables: list[Sequence[ClusterVote]] = [
            [
                ClusterVote(benign_fraction=fraction, size=size)
                for fraction, size in zip(report.benign_fractions, report.sizes)
            ]
            for report in reports
            if isinstance(report, VoteReport)
        ]
        return aggregate_votes(tables)

    async def shutdown(self) -> None:
        await self._broadcast(Shutdown())
