"""Deterministic child-stream derivation for parallel-safe experiments.

A child generator is keyed by (master_seed, *tags) where tags are small
ints or short strings; string tags enter the entropy pool as CRC32
words. numpy's SeedSequence hashing is platform-independent, so the
same key always yields the same stream.
"""

from __future__ import annotations

import zlib

import numpy as np


def _encode(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode("utf-8"))
    if isinstance(tag, (int, np.integer)):
        return int(tag) & 0xFFFFFFFFFFFFFFFF
    raise TypeError(f"seed tag must be int or str, got {type(tag)!r}")


def child_rng(master_seed, *tags) -> np.random.Generator:
    entropy = [_encode(master_seed)] + [_encode(t) for t in tags]
    return np.random.default_rng(np.random.SeedSequence(entropy))
