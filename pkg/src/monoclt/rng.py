"""Counter-based, splittable random streams built on the SplitMix64 finalizer.

Every draw is a pure function of ``(seed, stream_id, sample_index, vertex_index)``,
so results do not depend on chunking, thread count or platform. Two levels of
SplitMix64 sequences are used: a per-stream key walks over sample indices, and
each per-sample key walks over vertex indices with a different odd increment.

The numpy functions here and the numba kernels in :mod:`monoclt.coloring` must
produce bit-identical output; ``tests/test_rng.py`` checks that.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA_SAMPLE = 0x9E3779B97F4A7C15
GAMMA_VERTEX = 0xD1B54A32D192ED03
GAMMA_STREAM = 0xC2B2AE3D27D4EB4F
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64_int(z: int) -> int:
    """SplitMix64 finalizer on a Python int (reference implementation)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream_id: int = 0) -> int:
    """Key identifying one independent stream of samples."""
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if stream_id < 0:
        raise ValueError("stream_id must be non-negative")
    return mix64_int(mix64_int(seed) ^ ((stream_id + 1) * GAMMA_STREAM & MASK64))


def sample_keys(key: int, indices: np.ndarray) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.uint64)
    return mix64(np.uint64(key) + (idx + np.uint64(1)) * np.uint64(GAMMA_SAMPLE))


def vertex_bits(sample_key: np.ndarray, n_vertices: int) -> np.ndarray:
    """Raw 64-bit draws, shape ``sample_key.shape + (n_vertices,)``."""
    v = np.arange(1, n_vertices + 1, dtype=np.uint64) * np.uint64(GAMMA_VERTEX)
    return mix64(np.asarray(sample_key, dtype=np.uint64)[..., None] + v)


def bounded(bits: np.ndarray, c: int) -> np.ndarray:
    """Map uniform 64-bit words to ``[0, c)`` by the high half of ``bits * c``.

    Each outcome probability is within ``2**-64`` of ``1/c``. Requires
    ``c < 2**32`` so the split multiply below cannot overflow.
    """
    if not 1 <= c < 1 << 32:
        raise ValueError("color count must be in [1, 2**32)")
    bits = np.asarray(bits, dtype=np.uint64)
    cc = np.uint64(c)
    hi = bits >> np.uint64(32)
    lo = bits & np.uint64(0xFFFFFFFF)
    return ((hi * cc + ((lo * cc) >> np.uint64(32))) >> np.uint64(32)).astype(np.int64)


def to_unit(bits: np.ndarray) -> np.ndarray:
    """Uniform doubles in ``[0, 1)`` from the top 53 bits."""
    return (np.asarray(bits, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * 2.0**-53
