"""Seeded counter-based random streams.

Philox generators keyed by ``(seed, substream)`` give independent,
platform-stable streams; every stochastic operation derives its own
substream from a string path, so results are reproducible regardless of
the order operations run in.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream(seed: int, *path: object) -> np.random.Generator:
    """Generator for the substream named by ``path`` under ``seed``."""
    text = "/".join(str(p) for p in path)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    word = int.from_bytes(digest, "little")
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(word)])
    return np.random.Generator(np.random.Philox(key=key))
