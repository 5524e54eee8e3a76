"""Deterministic randomness shared by every party of a simulated federation.

One root seed fans out into independent ``numpy`` generator streams: one for the
server and one per client. A party only ever draws from its own stream, so the
result of a run does not depend on how client tasks are interleaved.
"""

from __future__ import annotations

import hashlib

import numpy as np

SEED_BITS = 63


def derive_seed(root: int, *parts: object) -> int:
    """Hash ``root`` and ``parts`` into a stable non-negative seed."""
    combined = "|".join([str(root), *(str(part) for part in parts)])
    digest = hashlib.sha256(combined.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << SEED_BITS) - 1)


def as_generator(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def party_generators(root: int, n_clients: int) -> tuple[np.random.Generator, list[np.random.Generator]]:
    """Return ``(server_rng, client_rngs)`` spawned from ``root``."""
    server_seq, *client_seqs = np.random.SeedSequence(root).spawn(n_clients + 1)
    return np.random.default_rng(server_seq), [np.random.default_rng(seq) for seq in client_seqs]


def sample_index(rng: np.random.Generator, weights: np.ndarray) -> int:
    """Draw one index with probability ``weights[i] / weights.sum()``.

    Indices with zero weight are never returned.
    """
    cumulative = np.cumsum(np.asarray(weights, dtype=np.float64))
    total = float(cumulative[-1]) if cumulative.size else 0.0
    if total <= 0.0:
        raise ValueError("cannot sample from an all-zero weight vector")
    target = rng.random() * total
    index = int(np.searchsorted(cumulative, target, side="right"))
    if index >= cumulative.size:
        # target rounded up to the total; fall back to the last index with mass
        index = int(np.flatnonzero(np.asarray(weights) > 0)[-1])
    return index
