from .ledger import PrivacyLedger
from .messages import SERVER_ID, InvalidMessageError, Message, MessageKind, SampleMode
from .protocol import (
    Federation,
    fed_kmeans_round,
    fed_kmeanspp_init,
    local_kmeanspp_init,
    run_federated_kmeans,
)
from .sampling import client_selection_masses, local_d2_masses
from .server import ClientFailedError, ProtocolError
from .types import ClientState, FederatedRun, InitStrategy, ServerState

__all__ = [
    "SERVER_ID",
    "ClientFailedError",
    "ClientState",
    "FederatedRun",
    "Federation",
    "InitStrategy",
    "InvalidMessageError",
    "Message",
    "MessageKind",
    "PrivacyLedger",
    "ProtocolError",
    "SampleMode",
    "ServerState",
    "client_selection_masses",
    "fed_kmeans_round",
    "fed_kmeanspp_init",
    "local_d2_masses",
    "local_kmeanspp_init",
    "run_federated_kmeans",
]
