"""Uniform random colorings, monochromatic counts and Monte Carlo simulation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np
from numba import njit, prange

from . import rng
from .exact import DiscreteDistribution
from .graph import Graph

_BATCH = 1 << 20


@dataclass(frozen=True)
class ColoringConfig:
    c: int
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if self.c < 2:
            raise ValueError(f"need at least 2 colors, got c={self.c}")
        if self.c >= 1 << 32:
            raise ValueError("color count must be below 2**32")
        rng.stream_key(self.seed, self.stream_id)  # validates ranges

    @property
    def key(self) -> int:
        return rng.stream_key(self.seed, self.stream_id)


def sample_coloring(g: Graph, cfg: ColoringConfig, sample_index: int) -> np.ndarray:
    """Color vector of one sample; a pure function of (seed, stream_id, sample_index)."""
    sk = rng.sample_keys(cfg.key, np.array([sample_index]))
    return rng.bounded(rng.vertex_bits(sk, g.vertex_count), cfg.c)[0]


def monochromatic_count(g: Graph, coloring: np.ndarray, c: int | None = None) -> int:
    coloring = np.asarray(coloring)
    if coloring.shape != (g.vertex_count,):
        raise ValueError(f"coloring has length {coloring.size}, graph has {g.vertex_count} vertices")
    if coloring.size and (coloring.min() < 0 or (c is not None and coloring.max() >= c)):
        raise ValueError("color out of range")
    if not g.m:
        return 0
    ea = g.edge_array
    return int(np.count_nonzero(coloring[ea[:, 0]] == coloring[ea[:, 1]]))


def standardize(y, m: int, c: int):
    """``(y - m/c) / sqrt((m/c)(1 - 1/c))``; works on scalars and arrays."""
    if m < 1 or c < 2:
        raise ValueError("standardization needs m >= 1 and c >= 2")
    mean = m / c
    return (y - mean) / math.sqrt(mean * (1.0 - 1.0 / c))


# -- numba kernel (must match rng.py bit for bit) ----------------------------

_U30, _U27, _U31, _U32 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(32)
_M1, _M2 = np.uint64(0xBF58476D1CE4E5B9), np.uint64(0x94D049BB133111EB)
_GS, _GV = np.uint64(rng.GAMMA_SAMPLE), np.uint64(rng.GAMMA_VERTEX)
_LO = np.uint64(0xFFFFFFFF)


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _U30)) * _M1
    z = (z ^ (z >> _U27)) * _M2
    return z ^ (z >> _U31)


@njit(cache=True, parallel=True)
def _count_kernel(key, start, n, n_vertices, eu, ev, c, chunk):
    out = np.empty(n, np.int64)
    cc = np.uint64(c)
    n_chunks = (n + chunk - 1) // chunk
    for ch in prange(n_chunks):
        colors = np.empty(n_vertices, np.uint64)
        lo = ch * chunk
        hi = min(n, lo + chunk)
        for t in range(lo, hi):
            sk = _mix(key + (np.uint64(start + t) + np.uint64(1)) * _GS)
            for v in range(n_vertices):
                bits = _mix(sk + np.uint64(v + 1) * _GV)
                colors[v] = ((bits >> _U32) * cc + (((bits & _LO) * cc) >> _U32)) >> _U32
            y = 0
            for e in range(eu.size):
                if colors[eu[e]] == colors[ev[e]]:
                    y += 1
            out[t] = y
    return out


def set_threads(n: int | None) -> int:
    """Cap numba's worker count; results never depend on it."""
    if n is not None:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
    return numba.get_num_threads()


def sample_counts(g: Graph, cfg: ColoringConfig, start: int, stop: int) -> np.ndarray:
    """Monochromatic counts for global sample indices ``start..stop-1``."""
    n = stop - start
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    ea = g.edge_array
    eu = np.ascontiguousarray(ea[:, 0])
    ev = np.ascontiguousarray(ea[:, 1])
    return _count_kernel(np.uint64(cfg.key), np.int64(start), np.int64(n), np.int64(g.vertex_count),
                         eu, ev, np.int64(cfg.c), np.int64(4096))


@dataclass(frozen=True)
class SampleSummary:
    """Histogram of Y over a range of sample indices, plus provenance."""

    n_samples: int
    histogram: dict[int, int]
    seed: int
    stream_id: int = 0
    stream_count: int = 1
    mean: float = field(init=False)
    variance: float = field(init=False)

    def __post_init__(self):
        if sum(self.histogram.values()) != self.n_samples:
            raise ValueError("histogram counts do not sum to n_samples")
        n = self.n_samples
        s1 = sum(y * k for y, k in self.histogram.items())
        s2 = sum(y * y * k for y, k in self.histogram.items())
        mean = Fraction(s1, n) if n else Fraction(0)
        var = Fraction(s2, n) - mean * mean if n else Fraction(0)
        object.__setattr__(self, "mean", float(mean))
        object.__setattr__(self, "variance", float(var))

    def merge(self, other: "SampleSummary") -> "SampleSummary":
        if (self.seed, self.stream_id) != (other.seed, other.stream_id):
            raise ValueError("can only merge summaries of the same seed and stream")
        hist = dict(self.histogram)
        for y, k in other.histogram.items():
            hist[y] = hist.get(y, 0) + k
        return SampleSummary(self.n_samples + other.n_samples, dict(sorted(hist.items())),
                             self.seed, self.stream_id, self.stream_count + other.stream_count)

    def distribution(self) -> DiscreteDistribution:
        return DiscreteDistribution.from_counts(self.histogram, self.n_samples)

    def to_csv(self) -> str:
        return "y,count\n" + "".join(f"{y},{k}\n" for y, k in sorted(self.histogram.items()))


def simulate_range(g: Graph, cfg: ColoringConfig, start: int, stop: int) -> SampleSummary:
    hist: dict[int, int] = {}
    for lo in range(start, stop, _BATCH):
        y = sample_counts(g, cfg, lo, min(stop, lo + _BATCH))
        vals, cnt = np.unique(y, return_counts=True)
        for v, k in zip(vals.tolist(), cnt.tolist()):
            hist[v] = hist.get(v, 0) + k
    return SampleSummary(stop - start, dict(sorted(hist.items())), cfg.seed, cfg.stream_id)


def simulate(g: Graph, cfg: ColoringConfig, n_samples: int, partitions: int = 1) -> SampleSummary:
    """Histogram of Y over sample indices ``0..n_samples-1``.

    ``partitions`` splits the index range into contiguous blocks that are
    simulated separately and merged; the histogram is identical for any value.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if partitions < 1:
        raise ValueError("partitions must be >= 1")
    bounds = np.linspace(0, n_samples, partitions + 1).astype(np.int64).tolist()
    out = None
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        part = simulate_range(g, cfg, lo, hi)
        out = part if out is None else out.merge(part)
    return out
