"""Independent checking machinery: exact distributions, brute-force walk
enumeration, and small statistical test helpers.

Everything here recomputes its answers from first principles (plain dicts,
Fractions, explicit adjacency) rather than calling the bit-packed fast paths
it is meant to check.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import CapacityError, EmptyGraphError
from .hypergraph import Hypergraph, VertexSet
from .kikuchi import KikuchiGraph, MaterializedKikuchi, compute_params
from .utils import coerce_rng

__all__ = [
    "EmpiricalTest",
    "mean_test",
    "proportion_test",
    "CheckResult",
    "exact_stationary_distribution",
    "low_degree_stationary_mass",
    "exhaustive_closed_walk_check",
    "chi_square_uniformity",
    "tv_distance",
    "uniform_collision_probability",
    "kikuchi_equivalence_suite",
]

CLOSED_WALKS_PER_START_CAP = 1000
EXHAUSTIVE_MAX_T = 6


@dataclass(frozen=True)
class EmpiricalTest:
    """A Monte-Carlo estimate gated at three standard errors."""

    name: str
    samples: int
    statistic: float
    expected: float
    sigma: float
    passed: bool

    def describe(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{verdict}: {self.name} = {self.statistic:.6g} "
            f"(expected {self.expected:.6g} +- 3*{self.sigma:.3g}, "
            f"{self.samples} samples)"
        )


def mean_test(name: str, values, expected: float) -> EmpiricalTest:
    """Gate the sample mean at 3 standard errors of the sample."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise ValueError("need at least two samples")
    mean = float(arr.mean())
    sigma = float(arr.std(ddof=1) / math.sqrt(arr.size))
    passed = abs(mean - expected) <= 3.0 * sigma if sigma > 0 else mean == expected
    return EmpiricalTest(name, int(arr.size), mean, float(expected), sigma, passed)


def proportion_test(name: str, successes: int, trials: int, expected: float) -> EmpiricalTest:
    """Gate an empirical proportion at 3 binomial standard errors."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0.0 <= expected <= 1.0:
        raise ValueError("expected proportion must lie in [0, 1]")
    rate = successes / trials
    sigma = math.sqrt(expected * (1.0 - expected) / trials)
    passed = abs(rate - expected) <= 3.0 * sigma if sigma > 0 else rate == expected
    return EmpiricalTest(name, trials, rate, expected, sigma, passed)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def describe(self) -> str:
        return f"{'pass' if self.passed else 'FAIL'}: {self.name} ({self.detail})"


def exact_stationary_distribution(mat: MaterializedKikuchi) -> dict[VertexSet, Fraction]:
    """pi(w) = deg(w) / (2 * |E|), exactly; undefined on edgeless graphs."""
    total = sum(mat.degrees)
    if total == 0:
        raise EmptyGraphError("stationary distribution undefined: graph has no edges")
    return {w: Fraction(mat.degrees[i], total) for i, w in enumerate(mat.vertices)}


def low_degree_stationary_mass(mat: MaterializedKikuchi, beta: Fraction) -> Fraction:
    """Exact stationary mass of vertices with degree strictly below beta * d_bar."""
    total = sum(mat.degrees)
    if total == 0:
        raise EmptyGraphError("no edges")
    cutoff = Fraction(beta) * mat.average_degree()
    return Fraction(sum(d for d in mat.degrees if d < cutoff), total)


def _cover_touches_evenly(h: Hypergraph, colors: Sequence[int]) -> bool:
    touches: Counter[int] = Counter()
    for c in colors:
        for v in h.edges[c]:
            touches[v] += 1
    return all(count % 2 == 0 for count in touches.values())


def exhaustive_closed_walk_check(
    mat: MaterializedKikuchi, h: Hypergraph, max_t: int
) -> tuple[bool, dict | None]:
    """Enumerate every closed walk of length <= max_t; verify the cover claim.

    The claim: the odd-multiplicity colors of a closed walk touch every
    vertex an even number of times (so they form an even cover, or the empty
    set).  Returns (True, None) or (False, counterexample-description).
    Guarded to max_t <= 6 and 1000 closed walks per start.
    """
    if max_t > EXHAUSTIVE_MAX_T:
        raise CapacityError(f"max_t={max_t} exceeds the exhaustive cap {EXHAUSTIVE_MAX_T}")

    def dfs(start: int, vertex: int, colors: list[int], closed_seen: list[int]):
        if len(colors) <= max_t and colors and vertex == start:
            closed_seen[0] += 1
            if closed_seen[0] > CLOSED_WALKS_PER_START_CAP:
                raise CapacityError(
                    f"more than {CLOSED_WALKS_PER_START_CAP} closed walks from one start"
                )
            odd = sorted(c for c, mult in Counter(colors).items() if mult % 2)
            if not _cover_touches_evenly(h, odd):
                yield {
                    "start": mat.vertices[start],
                    "colors": tuple(colors),
                    "odd_colors": tuple(odd),
                }
        if len(colors) == max_t:
            return
        for nbr, color in mat.adjacency[vertex]:
            colors.append(color)
            yield from dfs(start, nbr, colors, closed_seen)
            colors.pop()

    for start in range(len(mat.vertices)):
        closed_seen = [0]
        for counterexample in dfs(start, start, [], closed_seen):
            return False, counterexample
    return True, None


def tv_distance(counts, probs) -> float:
    """Total variation distance between empirical counts and exact probabilities."""
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if counts.shape != probs.shape:
        raise ValueError("counts and probs must have the same shape")
    total = counts.sum()
    if total <= 0:
        raise ValueError("need at least one observation")
    return float(0.5 * np.abs(counts / total - probs).sum())


def chi_square_uniformity(observed, expected_probs) -> float:
    """p-value of a chi-square goodness-of-fit test against given cell probabilities."""
    observed = np.asarray(observed, dtype=np.float64)
    probs = np.asarray(expected_probs, dtype=np.float64)
    if observed.shape != probs.shape or observed.ndim != 1:
        raise ValueError("observed and expected_probs must be 1-d of equal length")
    if np.any(probs <= 0):
        raise ValueError("expected cell probabilities must be positive")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("expected cell probabilities must sum to one")
    f_exp = probs * observed.sum()
    return float(stats.chisquare(observed, f_exp).pvalue)


def uniform_collision_probability(draws: int, population: int) -> float:
    """P(two equal values among ``draws`` uniform picks from ``population``).

    This is the smallest collision probability any distribution on a set of
    that size can have, so it lower-bounds collision rates for endpoint
    distributions supported on at most ``population`` points.
    """
    if draws < 0 or population < 1:
        raise ValueError("need draws >= 0 and population >= 1")
    no_collision = 1.0
    for i in range(min(draws, population)):
        no_collision *= 1.0 - i / population
    if draws > population:
        no_collision = 0.0
    return 1.0 - no_collision


def kikuchi_equivalence_suite(
    h: Hypergraph, ell: int, rng, stationary_samples: int = 100_000
) -> list[CheckResult]:
    """Cross-check the implicit Kikuchi queries against a materialized copy.

    Exact checks: per-vertex degrees, per-vertex colored neighbor sets, and
    the closed-form average degree.  Sampled check: the stationary sampler's
    empirical law versus exact pi, gated at total variation 0.05.
    """
    graph = KikuchiGraph(h, ell)
    mat = graph.materialize()
    results: list[CheckResult] = []

    mismatches = sum(
        1 for i, w in enumerate(mat.vertices) if graph.degree(w) != len(mat.adjacency[i])
    )
    results.append(
        CheckResult(
            "degrees agree",
            mismatches == 0,
            f"{len(mat.vertices) - mismatches}/{len(mat.vertices)} vertices exact",
        )
    )

    nbr_bad = 0
    for i, w in enumerate(mat.vertices):
        implicit = {
            (mat.index[graph.neighbor_via(w, int(c))], int(c))
            for c in graph.incident_edges(w)
        }
        if implicit != set(mat.adjacency[i]):
            nbr_bad += 1
    results.append(
        CheckResult(
            "neighbor sets agree",
            nbr_bad == 0,
            f"{len(mat.vertices) - nbr_bad}/{len(mat.vertices)} vertices exact",
        )
    )

    params = compute_params(h, ell)
    avg = mat.average_degree()
    results.append(
        CheckResult(
            "average degree matches closed form",
            params.d_bar == avg,
            f"closed form {params.d_bar}, materialized {avg}",
        )
    )

    pi = exact_stationary_distribution(mat)
    gen = coerce_rng(rng)
    draws = graph.sample_stationary_vertices(gen, stationary_samples)
    counts = np.zeros(len(mat.vertices), dtype=np.int64)
    index = mat.index
    for row in draws:
        counts[index[tuple(int(v) for v in row)]] += 1
    probs = np.array([float(pi[w]) for w in mat.vertices])
    tv = tv_distance(counts, probs)
    results.append(
        CheckResult(
            "stationary sampler matches pi",
            tv <= 0.05,
            f"TV {tv:.4f} at {stationary_samples} samples",
        )
    )
    return results
