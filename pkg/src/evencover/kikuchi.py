"""The level-ell Kikuchi graph of a k-uniform hypergraph, queried implicitly.

Vertices are the ell-subsets of range(n); w1 and w2 are adjacent iff their
symmetric difference is a hyperedge, and that hyperedge is the edge's color.
The graph is never stored: degree and neighbor queries scan the m hyperedges
with bit-packed popcounts, so everything runs in O(m) words per query even
when the vertex count C(n, ell) is astronomically large.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import CapacityError, EmptyGraphError, IsolatedVertexError
from .hypergraph import Hypergraph, VertexSet, symmetric_difference
from .utils import big_log, coerce_rng

__all__ = [
    "KikuchiParams",
    "compute_params",
    "compute_params_from_counts",
    "KikuchiGraph",
    "MaterializedKikuchi",
    "MATERIALIZE_VERTEX_CAP",
]

MATERIALIZE_VERTEX_CAP = 100_000


@dataclass(frozen=True)
class KikuchiParams:
    """Size and degree parameters of a level-ell Kikuchi graph.

    N is exact (big integer) and d_bar is the exact rational average degree
    C(n-k, ell-k/2) * C(k, k/2) * m / C(n, ell); the float views are for
    formula plumbing.  delta = C(k, k/2) * m / n^(k/2) is the density the
    asymptotic degree estimate ell^(k/2) * delta refers to.
    """

    n: int
    k: int
    m: int
    ell: int
    N: int
    d_bar: Fraction
    delta: float

    @property
    def d_bar_float(self) -> float:
        return float(self.d_bar)

    @property
    def d_bar_asymptotic(self) -> float:
        return self.ell ** (self.k // 2) * self.delta

    @property
    def log2_N(self) -> float:
        return big_log(self.N, 2)

    @property
    def ln_N(self) -> float:
        return big_log(self.N)


def _check_level(n: int, k: int, ell: int) -> None:
    if not k // 2 <= ell <= n - k // 2:
        raise ValueError(
            f"level ell={ell} outside [k/2, n - k/2] = [{k // 2}, {n - k // 2}]; "
            "outside that band the Kikuchi graph has no edges at all"
        )


def compute_params_from_counts(n: int, k: int, m: int, ell: int) -> KikuchiParams:
    """Exact N and average degree from the raw counts alone."""
    if k < 2 or k % 2 or k > n:
        raise ValueError(f"need even k with 2 <= k <= n, got k={k}, n={n}")
    if m < 0 or m > math.comb(n, k):
        raise ValueError(f"m={m} outside [0, C({n},{k})]")
    _check_level(n, k, ell)
    N = math.comb(n, ell)
    d_bar = Fraction(math.comb(n - k, ell - k // 2) * math.comb(k, k // 2) * m, N)
    delta = math.comb(k, k // 2) * m / n ** (k // 2)
    return KikuchiParams(n=n, k=k, m=m, ell=ell, N=N, d_bar=d_bar, delta=delta)


def compute_params(h: Hypergraph, ell: int) -> KikuchiParams:
    """Exact N and average degree for the level-ell Kikuchi graph of h."""
    return compute_params_from_counts(h.n, h.k, h.m, ell)


class KikuchiGraph:
    """Implicit Kikuchi graph with O(m)-time degree and neighbor queries."""

    def __init__(self, h: Hypergraph, ell: int):
        _check_level(h.n, h.k, ell)
        self.hypergraph = h
        self.ell = int(ell)
        self._n_words = (h.n + 63) // 64
        self._edge_words = self._pack_many(h.edges)
        self._edge_array = (
            np.array(h.edges, dtype=np.int64)
            if h.m
            else np.zeros((0, h.k), dtype=np.int64)
        )
        self._half = h.k // 2

    @cached_property
    def params(self) -> KikuchiParams:
        return compute_params(self.hypergraph, self.ell)

    def _pack_many(self, vertex_sets) -> np.ndarray:
        words = np.zeros((len(vertex_sets), self._n_words), dtype=np.uint64)
        for i, vs in enumerate(vertex_sets):
            for v in vs:
                words[i, v >> 6] |= np.uint64(1 << (v & 63))
        return words

    def _check_vertex(self, w) -> VertexSet:
        out = tuple(int(v) for v in w)
        if len(out) != self.ell:
            raise ValueError(f"vertex must have {self.ell} elements, got {out}")
        for prev, cur in zip(out, out[1:]):
            if cur <= prev:
                raise ValueError(f"vertex must be strictly increasing, got {out}")
        if out and (out[0] < 0 or out[-1] >= self.hypergraph.n):
            raise ValueError(f"vertex outside range(0, {self.hypergraph.n}): {out}")
        return out

    def incident_edges(self, w) -> np.ndarray:
        """Indices of hyperedges e with |w intersect e| = k/2, in index order."""
        out = self._check_vertex(w)
        if not self.hypergraph.m:
            return np.zeros(0, dtype=np.int64)
        packed = self._pack_many([out])[0]
        counts = np.bitwise_count(self._edge_words & packed[np.newaxis, :]).sum(axis=1)
        return np.nonzero(counts == self._half)[0].astype(np.int64)

    def degree(self, w) -> int:
        return int(self.incident_edges(w).size)

    def neighbor_via(self, w, color: int) -> VertexSet:
        """The vertex w xor e_color; valid only if that edge is incident to w."""
        out = self._check_vertex(w)
        nbr = symmetric_difference(out, self.hypergraph.edges[color])
        if len(nbr) != self.ell:
            raise ValueError(f"edge {color} is not incident to {out}")
        return nbr

    def sample_neighbor(self, w, rng) -> tuple[VertexSet, int]:
        """Uniform neighbor of w, returned with the connecting edge's index."""
        gen = coerce_rng(rng)
        incident = self.incident_edges(w)
        if incident.size == 0:
            raise IsolatedVertexError(f"vertex {tuple(w)} has no incident hyperedges")
        color = int(incident[gen.integers(incident.size)])
        return self.neighbor_via(w, color), color

    @cached_property
    def _complement_array(self) -> np.ndarray:
        # Row i lists the n - k vertices outside edge i, ascending.
        h = self.hypergraph
        comp = np.zeros((h.m, h.n - h.k), dtype=np.int64)
        all_v = np.arange(h.n, dtype=np.int64)
        for i, edge in enumerate(h.edges):
            comp[i] = np.setdiff1d(all_v, np.array(edge, dtype=np.int64))
        return comp

    def sample_stationary_vertices(self, rng, size: int) -> np.ndarray:
        """``size`` draws from the degree-biased (stationary) vertex law.

        Recipe: pick a uniform hyperedge e, a uniform half of it, and a
        uniform (ell - k/2)-subset of the vertices outside e.  The resulting
        law weights each vertex proportionally to its degree, which is the
        stationary distribution of the walk.  Rows come back sorted.
        """
        h = self.hypergraph
        if h.m == 0:
            raise EmptyGraphError("stationary distribution undefined without edges")
        gen = coerce_rng(rng)
        half, rest = self._half, self.ell - self._half
        eidx = gen.integers(h.m, size=size)
        sel = np.argsort(gen.random((size, h.k)), axis=1)[:, :half]
        eprime = np.take_along_axis(self._edge_array[eidx], sel, axis=1)
        if rest:
            fsel = np.argsort(gen.random((size, h.n - h.k)), axis=1)[:, :rest]
            fill = np.take_along_axis(self._complement_array[eidx], fsel, axis=1)
            eprime = np.concatenate([eprime, fill], axis=1)
        return np.sort(eprime, axis=1)

    def sample_stationary_vertex(self, rng) -> VertexSet:
        return tuple(int(v) for v in self.sample_stationary_vertices(rng, 1)[0])

    def materialize(self) -> "MaterializedKikuchi":
        """Explicit adjacency for small graphs, built by plain set arithmetic.

        Deliberately avoids the popcount fast path above so materialized
        graphs can serve as an independent oracle for it.  Guarded to
        C(n, ell) <= 100000 vertices.
        """
        h = self.hypergraph
        N = math.comb(h.n, self.ell)
        if N > MATERIALIZE_VERTEX_CAP:
            raise CapacityError(f"{N} vertices exceed the materialization cap")
        vertices = list(itertools.combinations(range(h.n), self.ell))
        index = {w: i for i, w in enumerate(vertices)}
        adjacency: list[list[tuple[int, int]]] = [[] for _ in vertices]
        for i, w in enumerate(vertices):
            ws = set(w)
            for color, edge in enumerate(h.edges):
                diff = ws.symmetric_difference(edge)
                if len(diff) == self.ell:
                    adjacency[i].append((index[tuple(sorted(diff))], color))
        return MaterializedKikuchi(
            hypergraph=h, ell=self.ell, vertices=tuple(vertices), adjacency=adjacency
        )


@dataclass(frozen=True)
class MaterializedKikuchi:
    """A fully expanded Kikuchi graph: every vertex and every colored edge."""

    hypergraph: Hypergraph
    ell: int
    vertices: tuple[VertexSet, ...]
    adjacency: list[list[tuple[int, int]]]

    @cached_property
    def index(self) -> dict[VertexSet, int]:
        return {w: i for i, w in enumerate(self.vertices)}

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @property
    def edge_count(self) -> int:
        total = sum(self.degrees)
        if total % 2:
            raise AssertionError("adjacency lists are not symmetric")
        return total // 2

    def average_degree(self) -> Fraction:
        return Fraction(sum(self.degrees), len(self.vertices))

    def neighbor_set(self, w) -> set[tuple[int, int]]:
        return set(self.adjacency[self.index[tuple(w)]])

    def to_dot(self) -> str:
        """GraphViz rendering with vertices named by their sorted elements."""
        def name(w: VertexSet) -> str:
            return '"' + "_".join(str(v) for v in w) + '"'

        lines = ["graph kikuchi {"]
        for w in self.vertices:
            lines.append(f"  {name(w)};")
        for i, w in enumerate(self.vertices):
            for j, color in self.adjacency[i]:
                if i < j:
                    lines.append(f"  {name(w)} -- {name(self.vertices[j])} [label={color}];")
        lines.append("}")
        return "\n".join(lines)
