"""Seeded random streams keyed by ``(seed, label, index...)``.

Every random draw in the package comes from a stream obtained here, so a
result depends only on the seed and on *which* stream produced it, never on
evaluation order or on how work is split across processes.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def label_key(label: str) -> int:
    """Stable 64-bit key of a purpose label (independent of PYTHONHASHSEED)."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stream(seed: int, label: str, *index: int) -> np.random.Generator:
    """Independent generator for ``(seed, label, *index)``."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=(label_key(label),) + tuple(int(i) for i in index),
    )
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, label: str, *index: int) -> int:
    """A 64-bit child seed, for handing to functions that take a seed."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & _MASK64,
        spawn_key=(label_key(label),) + tuple(int(i) for i in index),
    )
    return int(ss.generate_state(1, dtype=np.uint64)[0])
