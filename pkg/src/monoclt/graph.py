"""Simple undirected graphs, deterministic generators and edge statistics."""
from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import rng

FAMILIES = ("complete", "cycle", "path", "star", "matching", "complete_bipartite", "erdos_renyi")


class GraphError(ValueError):
    """Invalid graph input (self-loop, duplicate edge, bad endpoint, bad params)."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    Edges are canonicalized to ``u < v`` and labelled ``0..m-1`` in input order.
    Use :func:`from_edge_list` to build a validated instance.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=np.int64)
        if self.m:
            np.add.at(deg, self.edge_array.ravel(), 1)
        return deg

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def incident_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def low_endpoint(self, i: int) -> int:
        """Endpoint of edge ``i`` with the smaller degree; ties go to the lower id."""
        u, v = self.edges[i]
        du, dv = self.degrees[u], self.degrees[v]
        return u if du <= dv else v

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"# vertices {self.vertex_count}\n")
        for u, v in sorted(self.edges):
            buf.write(f"{u} {v}\n")
        return buf.getvalue()

    @cached_property
    def digest(self) -> str:
        """Short content hash of the canonical edge-list text (label order ignored)."""
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def from_edge_list(pairs: Iterable[Sequence[int]], vertex_count: int) -> Graph:
    if vertex_count < 0:
        raise GraphError("vertex_count must be non-negative")
    seen: set[tuple[int, int]] = set()
    edges = []
    for pair in pairs:
        a, b = (int(x) for x in pair)
        if a == b:
            raise GraphError(f"self-loop at vertex {a}")
        for x in (a, b):
            if not 0 <= x < vertex_count:
                raise GraphError(f"endpoint {x} out of range [0, {vertex_count})")
        e = (a, b) if a < b else (b, a)
        if e in seen:
            raise GraphError(f"duplicate edge {e}")
        seen.add(e)
        edges.append(e)
    return Graph(vertex_count, tuple(edges))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def generate(family: str, n: int = 0, *, b: int | None = None, p: float | None = None,
             seed: int | None = None) -> Graph:
    """Build a graph from a named family.

    ``n`` is the vertex count for every family except ``matching`` (number of
    edges) and ``complete_bipartite`` (size of the first side; ``b`` is the
    second). ``erdos_renyi`` needs ``p`` and ``seed``.
    """
    if family == "complete":
        _need(n >= 1, "complete graph needs n >= 1")
        return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))
    if family == "cycle":
        _need(n >= 3, "cycle needs n >= 3")
        return from_edge_list([(i, (i + 1) % n) for i in range(n)], n)
    if family == "path":
        _need(n >= 1, "path needs n >= 1")
        return Graph(n, tuple((i, i + 1) for i in range(n - 1)))
    if family == "star":
        _need(n >= 1, "star needs n >= 1")
        return Graph(n, tuple((0, i) for i in range(1, n)))
    if family == "matching":
        _need(n >= 1, "matching needs n >= 1 edges")
        return Graph(2 * n, tuple((2 * i, 2 * i + 1) for i in range(n)))
    if family == "complete_bipartite":
        _need(n >= 1 and b is not None and b >= 1, "complete_bipartite needs n >= 1 and b >= 1")
        return Graph(n + b, tuple((u, n + v) for u in range(n) for v in range(b)))
    if family == "erdos_renyi":
        _need(n >= 1, "erdos_renyi needs n >= 1")
        _need(p is not None and 0.0 <= p <= 1.0, "erdos_renyi needs p in [0, 1]")
        _need(seed is not None, "erdos_renyi needs an explicit seed")
        return erdos_renyi(n, p, seed)
    raise GraphError(f"unknown family {family!r}; expected one of {FAMILIES}")


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): pair ``(u, v)`` with lexicographic rank ``k`` is kept iff draw ``k`` < p."""
    iu, iv = np.triu_indices(n, k=1)
    key = rng.stream_key(seed, 0)
    u = rng.to_unit(rng.sample_keys(key, np.arange(iu.size)))
    keep = u < p
    return Graph(n, tuple(zip(iu[keep].tolist(), iv[keep].tolist())))


@dataclass(frozen=True)
class EdgeStats:
    m: int
    degrees: np.ndarray
    min_degrees: np.ndarray
    K_m: int
    triangle_count: int
    component_sizes: tuple[int, ...]


def count_triangles(g: Graph) -> int:
    """Edge iterator: for edge (u, v), u < v, count common neighbours w > v."""
    adj = g.adjacency
    total = 0
    for u, v in g.edges:
        a, b = adj[u], adj[v]
        if len(a) > len(b):
            a, b = b, a
        total += sum(1 for w in a if w > v and w in b)
    return total


def edge_stats(g: Graph) -> EdgeStats:
    deg = g.degrees
    if g.m:
        ea = g.edge_array
        mind = np.minimum(deg[ea[:, 0]], deg[ea[:, 1]])
    else:
        mind = np.zeros(0, dtype=np.int64)
    comps = connected_components(g)
    return EdgeStats(
        m=g.m,
        degrees=deg,
        min_degrees=mind,
        K_m=int(mind.sum()),
        triangle_count=count_triangles(g),
        component_sizes=tuple(len(c.vertices) for c in comps),
    )


def neighborhood(g: Graph, i: int) -> frozenset[int]:
    """All edges incident to the low-degree endpoint of edge ``i`` (includes ``i``)."""
    if not 0 <= i < g.m:
        raise IndexError(f"edge index {i} out of range for m={g.m}")
    return frozenset(g.incident_edges[g.low_endpoint(i)])


class Component(NamedTuple):
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def connected_components(g: Graph) -> list[Component]:
    """Components ordered by smallest vertex; isolated vertices are singletons."""
    label = [-1] * g.vertex_count
    comps: list[list[int]] = []
    for s in range(g.vertex_count):
        if label[s] >= 0:
            continue
        label[s] = len(comps)
        stack, members = [s], [s]
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if label[y] < 0:
                    label[y] = label[s]
                    stack.append(y)
                    members.append(y)
        comps.append(sorted(members))
    edge_groups: list[list[int]] = [[] for _ in comps]
    for i, (u, _) in enumerate(g.edges):
        edge_groups[label[u]].append(i)
    return [Component(tuple(v), tuple(e)) for v, e in zip(comps, edge_groups)]


def induced(g: Graph, comp: Component) -> Graph:
    """Relabel a component's vertices to ``0..k-1`` keeping its edge order."""
    index = {v: k for k, v in enumerate(comp.vertices)}
    return Graph(len(comp.vertices), tuple(
        tuple(sorted((index[g.edges[i][0]], index[g.edges[i][1]]))) for i in comp.edges))


def lemma2_bound(m: int) -> float:
    return math.sqrt(2.0) * m ** 1.5


def triangle_bound(m: int) -> float:
    return math.sqrt(2.0) / 3.0 * m ** 1.5


# -- edge-list text format ---------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    vertex_count = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            tok = line[1:].split()
            if len(tok) == 2 and tok[0] == "vertices" and vertex_count is None:
                vertex_count = int(tok[1])
            continue
        line = line.split("#", 1)[0]
        tok = line.split()
        if len(tok) != 2:
            raise GraphError(f"line {lineno}: expected two vertex ids, got {raw!r}")
        pairs.append((int(tok[0]), int(tok[1])))
    if vertex_count is None:
        vertex_count = 1 + max((max(p) for p in pairs), default=-1)
    return from_edge_list(pairs, vertex_count)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(g.to_text())
