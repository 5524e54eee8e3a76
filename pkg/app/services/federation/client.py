from __future__ import annotations

import logging

import numpy as np

from ...utils.seeding import sample_index
from ..classifier import client_vote
from ..dataset.types import Dataset
from ..kmeans.distance import nearest_many
from ..kmeans.seeding import kmeanspp_init
from ..kmeans.types import CentroidSet
from ..silhouette import client_mean_silhouette
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
    SilhouetteReportPayload,
    SizeReport,
    VoteReport,
)
from .sampling import local_d2_masses, local_uniform_masses
from .transport import Transport
from .types import ClientState

logger = logging.getLogger(__name__)


def local_lloyd_step(shard: Dataset, centroids: CentroidSet) -> tuple[np.ndarray, tuple[int, ...]]:
    """One Lloyd step from ``centroids``; centroids left without rows are dropped."""
    labels, _ = nearest_many(shard, centroids)
    counts = np.bincount(labels, minlength=centroids.k)
    sums = np.zeros((centroids.k, centroids.dim))
    np.add.at(sums, labels, shard.features)
    alive = counts > 0
    means = sums[alive] / counts[alive][:, None]
    return means, tuple(int(count) for count in counts[alive])


class FederatedClient:
    """Client node: answers server requests from its own shard and random stream."""

    def __init__(
        self,
        client_id: int,
        shard: Dataset,
        transport: Transport,
        rng: np.random.Generator,
    ) -> None:
        self.state = ClientState(client_id=client_id, shard=shard)
        self._transport = transport
        self._rng = rng

    @property
    def client_id(self) -> int:
        return self.state.client_id

    async def serve(self) -> None:
        while True:
            message = await self._transport.receive(self.client_id, SERVER_ID)
            if message.kind is MessageKind.SHUTDOWN:
                return
            try:
                replies = self.handle(message)
            except Exception as exc:
                logger.exception("Client %d failed on %s", self.client_id, message.kind.value)
                replies = [ClientError(reason=f"{type(exc).__name__}: {exc}")]
            for payload in replies:
                await self._transport.send(Message.build(self.client_id, SERVER_ID, payload))

    def handle(self, message: Message) -> list[Payload]:
        payload = message.payload
        state = self.state
        if message.kind is MessageKind.SESSION_OPEN:
            return [SizeReport(sizes=(state.shard.n_rows,))]
        if isinstance(payload, GlobalModel):
            state.install(CentroidSet(payload.centroids))
            return self._reply_to_model(payload)
        if isinstance(payload, SampleRequest):
            return self._sample(payload)
        raise ValueError(f"client cannot handle {message.kind.value}")

    def _reply_to_model(self, model: GlobalModel) -> list[Payload]:
        state = self.state
        assert state.centroids is not None
        if model.reply is None:
            return []
        if model.reply is MessageKind.POTENTIAL_REPORT:
            return [PotentialReport(potential=state.potential)]
        if model.reply is MessageKind.LOCAL_UPDATE:
            means, sizes = local_lloyd_step(state.shard, state.centroids)
            state.sizes = sizes
            if len(sizes) < state.centroids.k:
                logger.debug(
                    "Client %d keeps %d of %d centroids", self.client_id, len(sizes), state.centroids.k
                )
            return [LocalUpdate(centroids=means, sizes=sizes)]
        if model.reply is MessageKind.VOTE_REPORT:
            votes = client_vote(state.shard, state.centroids)
            return [
                VoteReport(
                    benign_fractions=tuple(vote.benign_fraction for vote in votes),
                    sizes=tuple(vote.size for vote in votes),
                )
            ]
        if model.reply is MessageKind.SILHOUETTE_REPORT:
            mean, count = client_mean_silhouette(state.shard, state.centroids, model.metric)
            return [SilhouetteReportPayload(mean=mean, count=count)]
        raise ValueError(f"unsupported reply kind {model.reply.value}")

    def _sample(self, request: SampleRequest) -> list[Payload]:
        shard = self.state.shard
        if request.mode is SampleMode.UNIFORM:
            index = sample_index(self._rng, local_uniform_masses(shard.n_rows))
            return [CentroidReveal(vector=shard.features[index].copy())]
        if request.mode is SampleMode.D2:
            if self.state.centroids is None:
                raise ValueError("D^2 sampling needs a global model")
            masses = local_d2_masses(shard.features, self.state.centroids)
            index = sample_index(self._rng, masses)
            return [CentroidReveal(vector=shard.features[index].copy())]
        # Local K-means++: seed cluster sizes first, then one reveal per seed.
        k = min(request.count, shard.distinct_rows())
        seeds = kmeanspp_init(shard, k, self._rng)
        labels, _ = nearest_many(shard, seeds)
        sizes = tuple(int(size) for size in np.bincount(labels, minlength=seeds.k))
        reveals: list[Payload] = [CentroidReveal(vector=row.copy()) for row in seeds.vectors]
        return [SizeReport(sizes=sizes), *reveals]
