from __future__ import annotations

import asyncio
import logging
from collections import defaultdict

from ....utils.logging import TRACE_LEVEL
from ..messages import Message
from .base import MessageListener

logger = logging.getLogger(__name__)


class MailboxTransport:
    """In-process transport: one FIFO queue per (sender, receiver) pair."""

    def __init__(self) -> None:
        self._queues: defaultdict[tuple[int, int], asyncio.Queue[Message]] = defaultdict(
            asyncio.Queue
        )
        self._listeners: list[MessageListener] = []
        self.sent = 0

    def subscribe(self, listener: MessageListener) -> None:
        self._listeners.append(listener)

    async def send(self, message: Message) -> None:
        self.sent += 1
        if logger.isEnabledFor(TRACE_LEVEL):
            logger.log(
                TRACE_LEVEL,
                "%s %d -> %d %s",
                message.kind.value,
                message.sender,
                message.receiver,
                message.summary(),
            )
        for listener in self._listeners:
            listener(message)
        await self._queues[(message.sender, message.receiver)].put(message)

    async def receive(self, receiver: int, sender: int) -> Message:
        return await self._queues[(sender, receiver)].get()

    def pending(self) -> int:
        return sum(queue.qsize() for queue in self._queues.values())
