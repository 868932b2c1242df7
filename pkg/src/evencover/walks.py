"""Random walks on the implicit Kikuchi graph and even-cover harvesting.

A closed walk's odd-multiplicity colors always form an even cover (or the
empty set, for a degenerate walk): each vertex of the walk enters and leaves
an even number of times, so every vertex of the symmetric difference of the
traversed hyperedges is cancelled.  Harvesting runs many short walks from
degree-weighted starts, pairs up walks that land on the same endpoint to
close them, and keeps the distinct nonempty covers that fall out.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import InsufficientCoversError
from .hypergraph import VertexSet
from .kikuchi import KikuchiGraph, KikuchiParams
from .utils import big_power, coerce_rng

__all__ = [
    "ColoredWalk",
    "GoodnessReport",
    "WalkSearchConfig",
    "ResolvedWalkSearch",
    "ClosedWalkSearchResult",
    "HarvestResult",
    "run_walk",
    "assess_goodness",
    "find_good_closed_walk",
    "odd_colors",
    "harvest_distinct_covers",
    "covers_to_dict",
    "covers_from_dict",
    "load_covers",
    "save_covers",
]

RESOLVE_CAP = 10**18


@dataclass(frozen=True)
class ColoredWalk:
    """A walk recorded as visited vertices, traversed colors, and degrees.

    ``degrees[t]`` is the Kikuchi degree of ``vertices[t]``; walks produced by
    run_walk always carry one degree per vertex.  A walk that stalled on an
    isolated vertex is simply shorter than requested.
    """

    vertices: tuple[VertexSet, ...]
    colors: tuple[int, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.colors) + 1:
            raise ValueError("a T-step walk visits T + 1 vertices")
        if len(self.degrees) != len(self.vertices):
            raise ValueError("need one degree per visited vertex")

    @property
    def length(self) -> int:
        return len(self.colors)

    @property
    def start(self) -> VertexSet:
        return self.vertices[0]

    @property
    def end(self) -> VertexSet:
        return self.vertices[-1]

    def is_closed(self) -> bool:
        return self.start == self.end

    def reversed(self) -> "ColoredWalk":
        return ColoredWalk(
            vertices=self.vertices[::-1],
            colors=self.colors[::-1],
            degrees=self.degrees[::-1],
        )

    def joined_with_reverse_of(self, other: "ColoredWalk") -> "ColoredWalk":
        """This walk followed by the reverse of ``other``; ends must meet."""
        if self.end != other.end:
            raise ValueError("walks do not share an endpoint")
        rev = other.reversed()
        return ColoredWalk(
            vertices=self.vertices + rev.vertices[1:],
            colors=self.colors + rev.colors,
            degrees=self.degrees + rev.degrees[1:],
        )


@dataclass(frozen=True)
class GoodnessReport:
    """Count of low-degree steps versus the 1.1 * beta * T allowance."""

    bad_count: int
    allowance: Fraction
    is_good: bool


def run_walk(graph: KikuchiGraph, v0, steps: int, rng) -> ColoredWalk:
    """Walk ``steps`` uniform-neighbor steps from v0, stopping early if stuck."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    gen = coerce_rng(rng)
    w = graph._check_vertex(v0)
    vertices = [w]
    colors: list[int] = []
    degrees: list[int] = []
    for _ in range(steps):
        incident = graph.incident_edges(w)
        degrees.append(int(incident.size))
        if incident.size == 0:
            return ColoredWalk(tuple(vertices), tuple(colors), tuple(degrees))
        color = int(incident[gen.integers(incident.size)])
        w = graph.neighbor_via(w, color)
        vertices.append(w)
        colors.append(color)
    degrees.append(graph.degree(w))
    return ColoredWalk(tuple(vertices), tuple(colors), tuple(degrees))


def assess_goodness(walk: ColoredWalk, beta: float, d_bar) -> GoodnessReport:
    """Count steps whose source vertex has degree below beta * d_bar.

    Only the walk's step sources (all vertices but the last) are counted.
    The walk is good when bad_count <= 1.1 * beta * T, non-strict, evaluated
    in exact rational arithmetic so the boundary case is unambiguous.
    """
    if walk.length < 1:
        raise ValueError("goodness is defined for walks of length >= 1")
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    beta_frac = Fraction(str(beta))
    cutoff = beta_frac * (d_bar if isinstance(d_bar, Fraction) else Fraction(str(float(d_bar))))
    bad = sum(1 for t in range(walk.length) if walk.degrees[t] < cutoff)
    allowance = Fraction("1.1") * beta_frac * walk.length
    return GoodnessReport(bad_count=bad, allowance=allowance, is_good=bad <= allowance)


def _ceil_capped(x: float) -> int:
    if x != x or x == math.inf:
        return RESOLVE_CAP
    return min(int(math.ceil(x)), RESOLVE_CAP)


@dataclass(frozen=True)
class WalkSearchConfig:
    """Knobs for walk search and harvesting.

    The paper profile derives L, R, and the cover target from (N, epsilon,
    delta) with the published constants; the desk profile runs the same
    machinery at bench scale and requires those knobs to be set explicitly.
    """

    T: int
    beta: float = 0.05
    c1: float = 200.0
    L: int | None = None
    R: int | None = None
    target_covers: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    profile: str = "paper"

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.c1 <= 0:
            raise ValueError("c1 must be positive")
        if self.profile not in ("paper", "desk"):
            raise ValueError(f"profile must be 'paper' or 'desk', got {self.profile!r}")
        for name in ("L", "R", "target_covers"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive when given")

    def resolve(self, params: KikuchiParams) -> "ResolvedWalkSearch":
        """Fill derived knobs from the graph parameters."""
        N = params.N
        L = self.L if self.L is not None else _ceil_capped(self.c1 * big_power(N, 0.5))
        if L < 2:
            raise ValueError("L must be at least 2 to ever observe a collision")
        if self.profile == "paper":
            if self.epsilon is None or self.delta is None:
                raise ValueError("paper profile needs epsilon and delta")
            if not 0 < self.delta < 1:
                raise ValueError("delta must lie in (0, 1)")
            n_eps = big_power(N, self.epsilon)
            R = self.R if self.R is not None else _ceil_capped(
                100_000 * n_eps + 100_000 * math.log2(1.0 / self.delta)
            )
            target = (
                self.target_covers
                if self.target_covers is not None
                else _ceil_capped(10 * n_eps)
            )
        else:
            if self.R is None or self.target_covers is None:
                raise ValueError("desk profile needs explicit R and target_covers")
            R, target = self.R, self.target_covers
        return ResolvedWalkSearch(
            T=self.T,
            beta=self.beta,
            L=L,
            R=R,
            target_covers=target,
            profile=self.profile,
        )


@dataclass(frozen=True)
class ResolvedWalkSearch:
    T: int
    beta: float
    L: int
    R: int
    target_covers: int
    profile: str


@dataclass(frozen=True)
class ClosedWalkSearchResult:
    """A collision of two good walks, closed into one walk of length 2T."""

    closed: ColoredWalk
    first_index: int
    second_index: int
    good_count: int
    walk_count: int


def find_good_closed_walk(
    graph: KikuchiGraph, v0, cfg: WalkSearchConfig | ResolvedWalkSearch, rng
) -> ClosedWalkSearchResult | None:
    """Run L walks from v0 and close the first good colliding pair.

    Among all pairs (i, j) with i < j where both walks are good (full length,
    goodness bound met) and share an endpoint, the lexicographically smallest
    pair is joined as walk_i followed by reversed walk_j.  Returns None when
    no such pair exists.
    """
    resolved = cfg if isinstance(cfg, ResolvedWalkSearch) else cfg.resolve(graph.params)
    gen = coerce_rng(rng)
    d_bar = graph.params.d_bar
    walks: list[ColoredWalk] = []
    good_indices_by_end: dict[VertexSet, list[int]] = {}
    good_count = 0
    for i in range(resolved.L):
        walk = run_walk(graph, v0, resolved.T, gen)
        walks.append(walk)
        if walk.length != resolved.T:
            continue
        if not assess_goodness(walk, resolved.beta, d_bar).is_good:
            continue
        good_count += 1
        good_indices_by_end.setdefault(walk.end, []).append(i)
    best: tuple[int, int] | None = None
    for indices in good_indices_by_end.values():
        if len(indices) >= 2:
            pair = (indices[0], indices[1])
            if best is None or pair < best:
                best = pair
    if best is None:
        return None
    i, j = best
    closed = walks[i].joined_with_reverse_of(walks[j])
    return ClosedWalkSearchResult(
        closed=closed,
        first_index=i,
        second_index=j,
        good_count=good_count,
        walk_count=resolved.L,
    )


def odd_colors(walk: ColoredWalk) -> tuple[int, ...]:
    """Sorted colors of odd multiplicity; an even cover whenever nonempty."""
    if not walk.is_closed():
        raise ValueError("odd_colors is defined for closed walks only")
    counts = Counter(walk.colors)
    return tuple(sorted(c for c, mult in counts.items() if mult % 2))


@dataclass(frozen=True)
class HarvestResult:
    """Distinct covers found plus counters describing how the search went."""

    covers: tuple[tuple[int, ...], ...]
    iterations: int
    collisions: int
    trivial: int
    duplicates: int
    target: int
    T: int


def _check_walk_degree_precondition(params: KikuchiParams, resolved: ResolvedWalkSearch):
    required = 300.0 * big_power(params.N, 4.0 / resolved.T) * resolved.T
    if params.d_bar_float < required:
        raise ValueError(
            f"paper profile needs average degree >= {required:.3g} "
            f"(300 * N^(4/T) * T), got {params.d_bar_float:.3g}"
        )


def harvest_distinct_covers(
    graph: KikuchiGraph, cfg: WalkSearchConfig, rng
) -> HarvestResult:
    """Collect distinct nonempty covers from repeated closed-walk searches.

    Each iteration starts from a fresh degree-weighted vertex, looks for one
    good closed walk, and keeps its odd-color set if it is nonempty and new.
    Raises InsufficientCoversError (partial covers attached) if R iterations
    pass without reaching the target.
    """
    resolved = cfg.resolve(graph.params)
    if resolved.profile == "paper":
        _check_walk_degree_precondition(graph.params, resolved)
    gen = coerce_rng(rng)
    covers: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    collisions = trivial = duplicates = 0
    iterations = 0
    for _ in range(resolved.R):
        iterations += 1
        v0 = graph.sample_stationary_vertex(gen)
        found = find_good_closed_walk(graph, v0, resolved, gen)
        if found is None:
            continue
        collisions += 1
        cover = odd_colors(found.closed)
        if not cover:
            trivial += 1
            continue
        if cover in seen:
            duplicates += 1
            continue
        seen.add(cover)
        covers.append(cover)
        if len(covers) >= resolved.target_covers:
            break
    result = HarvestResult(
        covers=tuple(covers),
        iterations=iterations,
        collisions=collisions,
        trivial=trivial,
        duplicates=duplicates,
        target=resolved.target_covers,
        T=resolved.T,
    )
    if len(covers) < resolved.target_covers:
        raise InsufficientCoversError(
            f"found {len(covers)}/{resolved.target_covers} covers "
            f"in {iterations} iterations",
            covers=list(covers),
            iterations=iterations,
        )
    return result


def covers_to_dict(covers: Sequence[Sequence[int]], T: int, seed) -> dict:
    return {
        "covers": [list(int(i) for i in cover) for cover in covers],
        "T": int(T),
        "seed": seed,
    }


def covers_from_dict(data: dict) -> tuple[list[tuple[int, ...]], int, object]:
    try:
        raw, T, seed = data["covers"], data["T"], data["seed"]
    except KeyError as exc:
        raise ValueError(f"covers JSON missing key {exc}") from exc
    return [tuple(int(i) for i in cover) for cover in raw], int(T), seed


def load_covers(path: str | Path):
    with open(path, "r", encoding="utf-8") as fh:
        return covers_from_dict(json.load(fh))


def save_covers(covers, T: int, seed, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(covers_to_dict(covers, T, seed), fh, indent=2)
        fh.write("\n")
