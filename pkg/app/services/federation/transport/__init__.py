from .base import MessageListener, Transport
from .mailbox import MailboxTransport

__all__ = ["MailboxTransport", "MessageListener", "Transport"]
