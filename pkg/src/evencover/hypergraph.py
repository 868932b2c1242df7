"""k-uniform hypergraphs, even covers, and exact GF(2) machinery.

An even cover is a nonempty set of hyperedges whose symmetric difference is
empty, i.e. every vertex is touched an even number of times.  Even covers are
exactly the nonzero vectors in the GF(2) nullspace of the vertex-by-edge
incidence matrix, which gives this module two independent routes to the same
objects: direct symmetric-difference checks and linear algebra over GF(2).
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CapacityError

__all__ = [
    "VertexSet",
    "Hypergraph",
    "symmetric_difference",
    "verify_even_cover",
    "gf2_nullspace_basis",
    "nullspace_echelon",
    "in_nullspace_span",
    "enumerate_even_covers",
    "hypergraph_to_dict",
    "hypergraph_from_dict",
    "load_hypergraph",
    "save_hypergraph",
]

# Vertices are 0-based ints; vertex sets are strictly increasing tuples.
VertexSet = tuple[int, ...]

ENUMERATION_EDGE_CAP = 25


def _check_vertex_set(vertices: Iterable[int], n: int, what: str) -> VertexSet:
    out = tuple(int(v) for v in vertices)
    for prev, cur in zip(out, out[1:]):
        if cur <= prev:
            raise ValueError(f"{what} must be strictly increasing, got {out}")
    if out and (out[0] < 0 or out[-1] >= n):
        raise ValueError(f"{what} has vertices outside range(0, {n}): {out}")
    return out


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertex set range(n).

    Edges are stored as sorted vertex tuples in a fixed order; the position of
    an edge in ``edges`` is its index (its color, in walk terminology).
    Duplicate edges are rejected rather than merged, because edge identity is
    what downstream sign vectors and covers refer to.
    """

    n: int
    k: int
    edges: tuple[VertexSet, ...]

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]]):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if k < 2 or k % 2 != 0:
            raise ValueError(f"k must be a positive even integer, got {k}")
        if k > n:
            raise ValueError(f"k={k} exceeds the number of vertices n={n}")
        normalized = []
        seen: set[VertexSet] = set()
        for i, edge in enumerate(edges):
            e = _check_vertex_set(sorted(edge), n, f"edge {i}")
            if len(e) != k:
                raise ValueError(f"edge {i} has {len(e)} vertices, expected k={k}")
            if len(set(e)) != k:
                raise ValueError(f"edge {i} repeats a vertex: {e}")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            normalized.append(e)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_bitmasks(self) -> tuple[int, ...]:
        """Each edge as an n-bit integer with bit v set iff v is in the edge."""
        masks = []
        for edge in self.edges:
            mask = 0
            for v in edge:
                mask |= 1 << v
            masks.append(mask)
        return tuple(masks)

    def is_canonical(self) -> bool:
        """True iff the edge list itself is in lexicographic order."""
        return all(a <= b for a, b in zip(self.edges, self.edges[1:]))


def symmetric_difference(a: Sequence[int], b: Sequence[int]) -> VertexSet:
    """Symmetric difference of two strictly increasing vertex tuples.

    Linear merge; raises ValueError if either input is not strictly sorted.
    """
    ta = _check_vertex_set(a, 1 << 62, "first operand")
    tb = _check_vertex_set(b, 1 << 62, "second operand")
    out: list[int] = []
    i = j = 0
    while i < len(ta) and j < len(tb):
        if ta[i] == tb[j]:
            i += 1
            j += 1
        elif ta[i] < tb[j]:
            out.append(ta[i])
            i += 1
        else:
            out.append(tb[j])
            j += 1
    out.extend(ta[i:])
    out.extend(tb[j:])
    return tuple(out)


def _check_edge_indices(h: Hypergraph, indices: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"edge indices repeat: {idx}")
    for i in idx:
        if not 0 <= i < h.m:
            raise ValueError(f"edge index {i} outside range(0, {h.m})")
    return idx


def verify_even_cover(h: Hypergraph, indices: Iterable[int]) -> bool:
    """True iff ``indices`` is a nonempty edge set with empty symmetric difference."""
    idx = _check_edge_indices(h, indices)
    if not idx:
        return False
    acc = 0
    for i in idx:
        acc ^= h.edge_bitmasks[i]
    return acc == 0


def gf2_nullspace_basis(h: Hypergraph) -> list[tuple[int, ...]]:
    """Basis of the GF(2) nullspace of the incidence matrix, as edge-index tuples.

    Columns are processed in edge order and pivots are taken at the lowest
    remaining vertex, so the basis is deterministic.  Each basis vector is a
    valid even cover, and its highest edge index is unique within the basis
    (the vectors come out in column echelon form).
    """
    pivots: dict[int, tuple[int, int]] = {}  # vertex -> (reduced column, combination)
    basis: list[tuple[int, ...]] = []
    for j, col in enumerate(h.edge_bitmasks):
        combo = 1 << j
        row = -1
        while col:
            row = (col & -col).bit_length() - 1
            if row not in pivots:
                break
            pcol, pcombo = pivots[row]
            col ^= pcol
            combo ^= pcombo
        if col:
            pivots[row] = (col, combo)
        else:
            basis.append(_mask_to_indices(combo))
    return basis


def _mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _indices_to_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def nullspace_echelon(h: Hypergraph) -> dict[int, int]:
    """Nullspace basis keyed by highest edge index, each vector as a bitmask."""
    echelon: dict[int, int] = {}
    for vec in gf2_nullspace_basis(h):
        mask = _indices_to_mask(vec)
        echelon[mask.bit_length() - 1] = mask
    return echelon


def in_nullspace_span(echelon: dict[int, int], indices: Iterable[int]) -> bool:
    """Whether an edge-index set lies in the span of a nullspace echelon basis."""
    mask = _indices_to_mask(indices)
    while mask:
        high = mask.bit_length() - 1
        if high not in echelon:
            return False
        mask ^= echelon[high]
    return True


def enumerate_even_covers(h: Hypergraph, max_size: int) -> list[tuple[int, ...]]:
    """All even covers of size <= max_size by brute-force subset enumeration.

    Guarded to m <= 25 edges; raises CapacityError beyond that.  Kept free of
    the GF(2) elimination code on purpose so the two routes can check each
    other.
    """
    if h.m > ENUMERATION_EDGE_CAP:
        raise CapacityError(
            f"refusing to enumerate subsets of {h.m} edges (cap {ENUMERATION_EDGE_CAP})"
        )
    if max_size < 0:
        raise ValueError("max_size must be nonnegative")
    masks = h.edge_bitmasks
    covers = []
    for size in range(1, min(max_size, h.m) + 1):
        for combo in itertools.combinations(range(h.m), size):
            acc = 0
            for i in combo:
                acc ^= masks[i]
            if acc == 0:
                covers.append(combo)
    return covers


def hypergraph_to_dict(h: Hypergraph) -> dict:
    """Canonical JSON form: vertex-sorted edges, edge list in lexicographic order."""
    return {
        "n": h.n,
        "k": h.k,
        "edges": [list(e) for e in sorted(h.edges)],
    }


def hypergraph_from_dict(data: dict) -> Hypergraph:
    """Build a Hypergraph from its JSON dict, warning if the form was not canonical.

    Edges arriving with unsorted vertices or a non-lexicographic edge list are
    normalized; a warning flags the rewrite because edge order is meaningful
    to sign vectors and covers.
    """
    try:
        n, k, edges = data["n"], data["k"], data["edges"]
    except KeyError as exc:
        raise ValueError(f"hypergraph JSON missing key {exc}") from exc
    sorted_edges = [sorted(int(v) for v in e) for e in edges]
    if sorted_edges != [list(map(int, e)) for e in edges] or sorted_edges != sorted(sorted_edges):
        warnings.warn("hypergraph JSON was not canonical; edges normalized", stacklevel=2)
        sorted_edges = sorted(sorted_edges)
    return Hypergraph(int(n), int(k), sorted_edges)


def load_hypergraph(path: str | Path) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return hypergraph_from_dict(json.load(fh))


def save_hypergraph(h: Hypergraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(hypergraph_to_dict(h), fh, indent=2)
        fh.write("\n")
