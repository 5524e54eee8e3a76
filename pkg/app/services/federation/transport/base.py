from __future__ import annotations

from collections.abc import Callable
from typing import Protocol, runtime_checkable

from ..messages import Message

MessageListener = Callable[[Message], None]


@runtime_checkable
class Transport(Protocol):
    async def send(self, message: Message) -> None:
        """Queue ``message`` for its receiver, preserving order per (sender, receiver) pair."""
        ...

    async def receive(self, receiver: int, sender: int) -> Message:
        """Wait for the next message from ``sender`` addressed to ``receiver``."""
        ...

    def subscribe(self, listener: MessageListener) -> None:
        """Call ``listener`` with every message at the moment it is sent."""
        ...
