"""Exact law of the monochromatic-edge count and exact moment/covariance oracles.

Component pmfs come from full enumeration of all ``c**|V|`` colorings (mixed-radix
counter, vertex 0 is the least significant digit). Components are independent,
so the graph pmf is their convolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .graph import Graph, connected_components, induced

DEFAULT_CAP = 10**8
_BLOCK = 1 << 18
# Exact integer convolution is kept while the common denominator has at most this many bits.
_EXACT_TOTAL_BITS = 2048


class InfeasibleError(RuntimeError):
    """Exact enumeration would exceed the configured state cap."""


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finite pmf on a strictly increasing support.

    ``exact``/``total`` hold integer weights over a common denominator when the
    distribution was built by counting; atoms whose float probability underflows
    are kept there but dropped from ``support``/``probs``.
    """

    support: np.ndarray
    probs: np.ndarray
    exact: Mapping[int, int] | None = None
    total: int | None = None
    m: int | None = None
    c: int | None = None
    standardized: bool = False

    def __post_init__(self):
        s, p = self.support, self.probs
        if s.ndim != 1 or s.shape != p.shape or s.size == 0:
            raise ValueError("support and probs must be equal-length non-empty vectors")
        if not np.all(np.isfinite(s)):
            raise ValueError("support values must be finite")
        if np.any(np.diff(s) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(p <= 0):
            raise ValueError("probabilities must be positive")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {math.fsum(p)!r}, not 1")

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], total: int | None = None, **meta) -> "DiscreteDistribution":
        exact = {int(k): int(v) for k, v in sorted(counts.items()) if v}
        if total is None:
            total = sum(exact.values())
        if sum(exact.values()) != total:
            raise ValueError("counts do not sum to total")
        keys = [k for k in exact if exact[k] / total > 0.0]
        probs = np.array([exact[k] / total for k in keys])
        # renormalise only the float view; exact weights are untouched
        probs = probs / math.fsum(probs)
        return cls(np.array(keys, dtype=np.int64), probs, exact, total, **meta)

    @classmethod
    def from_probs(cls, support: Sequence[float], probs: Sequence[float], **meta) -> "DiscreteDistribution":
        """Sort, merge duplicate atoms and drop zero masses."""
        s = np.asarray(support)
        p = np.asarray(probs, dtype=np.float64)
        order = np.argsort(s, kind="stable")
        s, p = s[order], p[order]
        uniq, start = np.unique(s, return_index=True)
        merged = np.add.reduceat(p, start) if s.size else p
        keep = merged > 0
        return cls(uniq[keep], merged[keep], **meta)

    def pmf(self) -> dict:
        return dict(zip(self.support.tolist(), self.probs.tolist()))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def standardize(self, m: int, c: int) -> "DiscreteDistribution":
        """Affine image ``W = (Y - m/c) / sqrt((m/c)(1 - 1/c))`` of an integer law."""
        from .coloring import standardize
        w = standardize(self.support.astype(np.float64), m, c)
        return DiscreteDistribution(w, self.probs.copy(), m=m, c=c, standardized=True)


def _enumerate_counts(g: Graph, c: int) -> np.ndarray:
    n, m = g.vertex_count, g.m
    states = c**n
    eu, ev = g.edge_array[:, 0], g.edge_array[:, 1]
    radix = np.array([c**k for k in range(n)], dtype=np.int64)
    counts = np.zeros(m + 1, dtype=np.int64)
    for lo in range(0, states, _BLOCK):
        idx = np.arange(lo, min(states, lo + _BLOCK), dtype=np.int64)
        colors = (idx[:, None] // radix) % c
        y = (colors[:, eu] == colors[:, ev]).sum(axis=1)
        counts += np.bincount(y, minlength=m + 1)
    return counts


def _is_tree(g: Graph) -> bool:
    return g.m == g.vertex_count - 1 and len(connected_components(g)) == 1


def exact_pmf_component(g: Graph, c: int, cap: int = DEFAULT_CAP, *,
                        allow_tree_rule: bool = True) -> DiscreteDistribution:
    """Exact pmf of the monochromatic count of a (connected) graph.

    Enumerates all colorings when ``c**|V| <= cap``. Above the cap a tree is
    still exact: its edge indicators are i.i.d. Bernoulli(1/c) (color the tree
    from a root), giving Binomial(m, 1/c) with integer weights over ``c**m``.
    """
    if c < 2:
        raise ValueError("need c >= 2")
    if g.m == 0:
        return DiscreteDistribution.from_counts({0: 1})
    states = c**g.vertex_count
    if states <= cap:
        counts = _enumerate_counts(g, c)
        return DiscreteDistribution.from_counts(dict(enumerate(counts.tolist())), states)
    if allow_tree_rule and _is_tree(g):
        m = g.m
        return DiscreteDistribution.from_counts(
            {k: math.comb(m, k) * (c - 1) ** (m - k) for k in range(m + 1)}, c**m)
    raise InfeasibleError(
        f"component with {g.vertex_count} vertices needs {c}^{g.vertex_count} states > cap {cap}")


def _shape_key(g: Graph) -> tuple:
    """Relabel vertices by first appearance in the edge list (cheap cache key)."""
    seen: dict[int, int] = {}
    out = []
    for u, v in g.edges:
        for x in (u, v):
            if x not in seen:
                seen[x] = len(seen)
        out.append((seen[u], seen[v]))
    return (g.vertex_count, tuple(out))


def _convolve_exact(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            out[ka + kb] = out.get(ka + kb, 0) + va * vb
    return out


def _dense(d: DiscreteDistribution) -> np.ndarray:
    arr = np.zeros(int(d.support[-1]) + 1)
    arr[d.support] = d.probs
    return arr


def _tree_reduce(items: list, op: Callable):
    while len(items) > 1:
        nxt = [op(items[k], items[k + 1]) for k in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def exact_pmf(g: Graph, c: int, cap: int = DEFAULT_CAP, *, allow_tree_rule: bool = True) -> DiscreteDistribution:
    """Exact pmf of Y for the whole graph by convolving component pmfs."""
    if c < 2:
        raise ValueError("need c >= 2")
    cache: dict[tuple, DiscreteDistribution] = {}
    parts = []
    for comp in connected_components(g):
        if not comp.edges:
            continue
        sub = induced(g, comp)
        key = _shape_key(sub)
        if key not in cache:
            cache[key] = exact_pmf_component(sub, c, cap, allow_tree_rule=allow_tree_rule)
        parts.append(cache[key])
    if not parts:
        return DiscreteDistribution.from_counts({0: 1})
    if len(parts) == 1:
        return parts[0]
    log2_total = sum(math.log2(p.total) for p in parts)
    if log2_total <= _EXACT_TOTAL_BITS:
        counts = _tree_reduce([dict(p.exact) for p in parts], _convolve_exact)
        return DiscreteDistribution.from_counts(counts, math.prod(p.total for p in parts))
    dense = _tree_reduce([_dense(p) for p in parts], np.convolve)
    dense = np.clip(dense, 0.0, None)
    keep = np.nonzero(dense > 0)[0]
    return DiscreteDistribution(keep.astype(np.int64), dense[keep] / math.fsum(dense[keep]))


class Moments(NamedTuple):
    mean: float
    variance: float


def exact_moments(d: DiscreteDistribution) -> Moments:
    """Mean and variance; rational arithmetic when integer weights are available."""
    if d.exact is not None:
        n = d.total
        s1 = sum(k * v for k, v in d.exact.items())
        s2 = sum(k * k * v for k, v in d.exact.items())
        mean = Fraction(s1, n)
        return Moments(float(mean), float(Fraction(s2, n) - mean * mean))
    x, p = d.support.astype(np.float64), d.probs
    mean = math.fsum(x * p)
    return Moments(mean, math.fsum(p * (x - mean) ** 2))


# -- indicator moments -------------------------------------------------------

class IndicatorMoments(NamedTuple):
    abs_first: float
    second: float
    abs_third: float


def edge_indicator_moments(m: int, c: int) -> IndicatorMoments:
    """Moments of one standardized edge indicator ``X = (I - 1/c) / sigma``.

    ``X`` is ``(1-p)/sigma`` w.p. ``p`` and ``-p/sigma`` otherwise, with
    ``p = 1/c`` and ``sigma**2 = m p (1-p)``.
    """
    if m < 1 or c < 2:
        raise ValueError("need m >= 1 and c >= 2")
    p = 1.0 / c
    q = 1.0 - p
    sigma = math.sqrt(m * p * q)
    return IndicatorMoments(
        abs_first=2.0 * p * q / sigma,
        second=p * q / sigma**2,
        abs_third=(p * q**3 + q * p**3) / sigma**3,
    )


# -- few-vertex expectations, collapsed over color relabelings ---------------

@lru_cache(maxsize=None)
def _set_partitions(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Restricted growth strings of length ``k`` with their block counts."""
    out = []

    def rec(prefix: list[int], blocks: int):
        if len(prefix) == k:
            out.append((tuple(prefix), blocks))
            return
        for b in range(blocks + 1):
            prefix.append(b)
            rec(prefix, max(blocks, b + 1))
            prefix.pop()

    rec([], 0)
    return tuple(out)


def _falling(c: int, b: int) -> int:
    return math.perm(c, b) if b <= c else 0


def centered_product_moment(edges: Sequence[tuple[int, int]], c: int) -> Fraction:
    """Exact ``E prod_e (I_e - 1/c)`` over the edges listed (repeats allowed).

    Only the colors of the touched vertices matter. A coloring of k vertices
    is determined up to relabeling by its set partition; a partition with b
    blocks is realised by ``c (c-1) ... (c-b+1)`` colorings.
    """
    index: dict[int, int] = {}
    for u, v in edges:
        index.setdefault(u, len(index))
        index.setdefault(v, len(index))
    local = tuple((index[u], index[v]) for u, v in edges)
    return _centered_product_local(local, len(index), c)


@lru_cache(maxsize=1 << 16)
def _centered_product_local(local: tuple[tuple[int, int], ...], k: int, c: int) -> Fraction:
    p = Fraction(1, c)
    acc = Fraction(0)
    for labels, blocks in _set_partitions(k):
        w = _falling(c, blocks)
        if not w:
            continue
        prod = Fraction(1)
        for u, v in local:
            prod *= (1 - p) if labels[u] == labels[v] else -p
        acc += w * prod
    return acc / Fraction(c) ** k


def _sigma2(m: int, c: int) -> Fraction:
    return Fraction(m, c) * (1 - Fraction(1, c))


def pair_covariance(g: Graph, c: int, i: int, j: int) -> float:
    """Exact ``Cov(X_i, X_j)`` for standardized edge indicators of ``g``."""
    for e in (i, j):
        if not 0 <= e < g.m:
            raise IndexError(f"edge index {e} out of range")
    shared = len(set(g.edges[i]) & set(g.edges[j]))
    return float(_raw_pair_cov(shared, c) / _sigma2(g.m, c))


def pair_covariance_matrix(g: Graph, c: int) -> np.ndarray:
    """All ``Cov(X_i, X_j)`` at once, keyed on the vertex overlap of each edge pair."""
    inc = np.zeros((g.vertex_count, g.m), dtype=np.int64)
    if g.m:
        inc[g.edge_array[:, 0], np.arange(g.m)] = 1
        inc[g.edge_array[:, 1], np.arange(g.m)] = 1
    shared = inc.T @ inc
    s2 = _sigma2(g.m, c)
    table = np.array([float(_raw_pair_cov(k, c) / s2) for k in range(3)])
    return table[shared]


@lru_cache(maxsize=None)
def _raw_pair_cov(shared: int, c: int) -> Fraction:
    # two edges overlap in 0, 1 or 2 vertices; the covariance depends on nothing else
    ei, ej = {0: ((0, 1), (2, 3)), 1: ((0, 1), (0, 2)), 2: ((0, 1), (0, 1))}[shared]
    return (centered_product_moment([ei, ej], c)
            - centered_product_moment([ei], c) * centered_product_moment([ej], c))


def triangle_mixed_moment(c: int, m: int) -> float:
    """Exact ``E X_i X_j^2 X_k`` for three edges forming a triangle, in a graph with m edges."""
    if c < 2 or m < 1:
        raise ValueError("need c >= 2 and m >= 1")
    ei, ej, ek = (0, 1), (1, 2), (0, 2)
    val = centered_product_moment([ei, ej, ej, ek], c)
    return float(val / _sigma2(m, c) ** 2)


# -- variance of the neighbourhood pair sum ----------------------------------

@dataclass(frozen=True)
class PairSumVariance:
    """Exact variance of ``S = sum_i sum_{j in N_i minus i} X_i X_j`` with its parts.

    ``same_pair`` collects terms whose two products use the same edge pair,
    ``triangle`` terms whose edges are exactly three edges of a triangle, and
    ``other`` everything else that is non-zero (e.g. four edges of a 4-cycle).
    """

    value: float
    same_pair: float
    triangle: float
    other: float
    n_pairs: int
    triangles: int
    m: int
    intermediate_bound: float = field(init=False)
    final_bound: float = field(init=False)

    def __post_init__(self):
        m = self.m
        object.__setattr__(self, "intermediate_bound", (2 * self.n_pairs + 6 * self.triangles) / m**2)
        object.__setattr__(self, "final_bound", (2 * 2**0.25 / m**0.25) ** 2)

    @property
    def intermediate_holds(self) -> bool:
        return self.value <= self.intermediate_bound * (1 + 1e-12)

    @property
    def final_holds(self) -> bool:
        return self.value <= self.final_bound * (1 + 1e-12)

    @property
    def chain_holds(self) -> bool:
        return self.intermediate_holds and self.intermediate_bound <= self.final_bound * (1 + 1e-12)


def neighbourhood_pairs(g: Graph) -> list[tuple[int, int]]:
    """Ordered pairs ``(i, j)`` with ``j`` in ``N_i`` and ``j != i``."""
    out = []
    for i in range(g.m):
        for j in g.incident_edges[g.low_endpoint(i)]:
            if j != i:
                out.append((i, j))
    return out


def _is_triangle(g: Graph, edge_ids: set[int]) -> bool:
    if len(edge_ids) != 3:
        return False
    verts = {x for e in edge_ids for x in g.edges[e]}
    return len(verts) == 3


def pair_sum_variance(g: Graph, c: int, max_terms: int = 10**7) -> PairSumVariance:
    """Exact ``Var(S)`` by summing exact covariances of all pair products.

    Terms whose vertex sets are disjoint vanish by independence and are skipped.
    """
    from .graph import count_triangles

    if g.m == 0:
        raise ValueError("graph has no edges")
    pairs = neighbourhood_pairs(g)
    if len(pairs) ** 2 > max_terms:
        raise InfeasibleError(f"{len(pairs)}^2 covariance terms exceed max_terms={max_terms}")
    masks = []
    for i, j in pairs:
        mk = 0
        for x in g.edges[i] + g.edges[j]:
            mk |= 1 << x
        masks.append(mk)
    means = [centered_product_moment([g.edges[i], g.edges[j]], c) for i, j in pairs]
    parts = {"same_pair": Fraction(0), "triangle": Fraction(0), "other": Fraction(0)}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if not masks[a] & masks[b]:
                continue
            cov = centered_product_moment(
                [g.edges[i], g.edges[j], g.edges[k], g.edges[l]], c) - means[a] * means[b]
            if not cov:
                continue
            ids = {i, j, k, l}
            if {i, j} == {k, l}:
                parts["same_pair"] += cov
            elif _is_triangle(g, ids):
                parts["triangle"] += cov
            else:
                parts["other"] += cov
    s4 = _sigma2(g.m, c) ** 2
    total = sum(parts.values())
    return PairSumVariance(
        value=float(total / s4),
        same_pair=float(parts["same_pair"] / s4),
        triangle=float(parts["triangle"] / s4),
        other=float(parts["other"] / s4),
        n_pairs=len(pairs),
        triangles=count_triangles(g),
        m=g.m,
    )
