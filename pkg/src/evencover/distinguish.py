"""Null-vs-planted decision from a batch of even covers.

The statistic is a polynomial with one monomial per cover, evaluated on
continuously noised signs x_e = xi_e * b_e with xi_e ~ Unif[0, 1].  Under the
null every monomial has mean zero; under the rho-planted model a cover C
contributes mean (rho / 2)^|C| because the hidden assignment cancels on even
covers and E[xi * eta] = rho / 2.  Restricting to covers shattered by a
random equipartition of the edges kills cross-cover correlation, which is
what makes the null tail controllable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .kikuchi import compute_params_from_counts
from .utils import big_log, big_power, coerce_rng, json_safe_float

__all__ = [
    "BlockPartition",
    "sample_equipartition",
    "is_shattered",
    "DistinguisherConfig",
    "ResolvedDistinguisher",
    "ShatterSelection",
    "select_shattered_covers",
    "evaluate_noised_polynomial",
    "planted_mean",
    "DecisionReport",
    "distinguish",
    "DerivedParams",
    "derive_theorem_params",
    "suggest_level",
]

S_HARD_CAP = 10**6
HALF_PLANTED_MEAN = "half-planted-mean"


@dataclass(frozen=True)
class BlockPartition:
    """A partition of range(m) into near-equal parts, as a part index array."""

    part_of: np.ndarray
    parts: int

    def __post_init__(self):
        part_of = np.asarray(self.part_of, dtype=np.int64)
        if part_of.ndim != 1:
            raise ValueError("part_of must be one-dimensional")
        if part_of.size and (part_of.min() < 0 or part_of.max() >= self.parts):
            raise ValueError("part indices out of range")
        sizes = np.bincount(part_of, minlength=self.parts)
        if sizes.size and sizes.max() - sizes.min() > 1:
            raise ValueError("parts must differ in size by at most one")
        object.__setattr__(self, "part_of", part_of)

    @property
    def m(self) -> int:
        return int(self.part_of.size)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.part_of, minlength=self.parts)


def sample_equipartition(m: int, parts: int, rng) -> BlockPartition:
    """Uniformly random partition of range(m) into ``parts`` near-equal parts."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if parts < 1:
        raise ValueError("parts must be positive")
    gen = coerce_rng(rng)
    part_of = np.empty(m, dtype=np.int64)
    part_of[gen.permutation(m)] = np.arange(m, dtype=np.int64) % parts
    return BlockPartition(part_of=part_of, parts=parts)


def is_shattered(cover: Sequence[int], partition: BlockPartition) -> bool:
    """True iff the cover's edges land in pairwise distinct parts."""
    idx = np.asarray(cover, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("shattering is defined for nonempty covers")
    parts = partition.part_of[idx]
    return np.unique(parts).size == idx.size


@dataclass(frozen=True)
class DistinguisherConfig:
    """Decision-stage knobs; unresolved fields are derived from N at resolve().

    threshold may be a number, or the rule name 'half-planted-mean' which
    sets the cut at half the planted-model mean of the selected covers (the
    bench-scale analogue of the paper's N^(0.6 epsilon) cut, which needs N
    large before it separates anything).
    """

    T: int
    rho: float
    epsilon: float
    delta: float = 0.01
    parts: int | None = None
    S: int | None = None
    s_cap: int = S_HARD_CAP
    shatter_floor: int | None = None
    threshold: float | str | None = None
    c_anti: float = 2.0
    repeats: int = 1
    profile: str = "paper"

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.c_anti <= 1.2:
            raise ValueError(f"c_anti must exceed 1.2, got {self.c_anti}")
        if self.repeats < 1 or self.repeats % 2 == 0:
            raise ValueError("repeats must be a positive odd integer")
        if self.profile not in ("paper", "desk"):
            raise ValueError(f"profile must be 'paper' or 'desk', got {self.profile!r}")
        if isinstance(self.threshold, str) and self.threshold != HALF_PLANTED_MEAN:
            raise ValueError(f"unknown threshold rule {self.threshold!r}")
        if self.parts is not None and self.parts < 1:
            raise ValueError("parts must be positive when given")
        if self.S is not None and self.S < 1:
            raise ValueError("S must be positive when given")

    def resolve(self, N: int) -> "ResolvedDistinguisher":
        if self.profile == "paper" and not 4 * math.log2(1.0 / self.delta) < self.T:
            raise ValueError(
                "paper profile requires 4 * log2(1/delta) < T; "
                f"got T={self.T}, delta={self.delta}"
            )
        parts = self.parts if self.parts is not None else 2 * self.T
        if self.S is not None:
            S = self.S
        else:
            log_s = math.log(10.0) + 2.0 * self.T
            S = self.s_cap if log_s > math.log(self.s_cap) else int(math.ceil(10.0 * math.exp(2.0 * self.T)))
        if self.shatter_floor is not None:
            floor = self.shatter_floor
        else:
            log_floor = self.epsilon * big_log(N) - self.T * math.log(10.0)
            floor = max(1, int(math.ceil(math.exp(log_floor))))
        if self.threshold is None:
            # Paper rule N^(0.6 epsilon); at bench scale that cut is
            # meaningless, so the desk profile defaults to the planted-mean rule.
            if self.profile == "paper":
                rule, value = "fixed", big_power(N, 0.6 * self.epsilon)
            else:
                rule, value = HALF_PLANTED_MEAN, None
        elif isinstance(self.threshold, str):
            rule, value = HALF_PLANTED_MEAN, None
        else:
            rule, value = "fixed", float(self.threshold)
        return ResolvedDistinguisher(
            T=self.T,
            rho=self.rho,
            parts=parts,
            S=min(S, self.s_cap),
            shatter_floor=floor,
            threshold_rule=rule,
            threshold=value,
            repeats=self.repeats,
            profile=self.profile,
        )


@dataclass(frozen=True)
class ResolvedDistinguisher:
    T: int
    rho: float
    parts: int
    S: int
    shatter_floor: int
    threshold_rule: str
    threshold: float | None
    repeats: int
    profile: str


@dataclass(frozen=True)
class ShatterSelection:
    """Outcome of the shattered-subfamily search."""

    partition: BlockPartition | None
    covers: tuple[tuple[int, ...], ...]
    attempts: int
    failed: bool


def select_shattered_covers(
    covers: Sequence[Sequence[int]], m: int, resolved: ResolvedDistinguisher, rng
) -> ShatterSelection:
    """Try up to S random equipartitions for one shattering enough covers.

    Succeeds on the first partition under which at least ``shatter_floor``
    covers are shattered; the kept family is truncated to exactly the floor,
    in input order.  Exhausting all S attempts is a normal 'failed' outcome,
    not an exception.
    """
    normalized = [tuple(int(i) for i in c) for c in covers]
    gen = coerce_rng(rng)
    for attempt in range(1, resolved.S + 1):
        partition = sample_equipartition(m, resolved.parts, gen)
        kept = [c for c in normalized if is_shattered(c, partition)]
        if len(kept) >= resolved.shatter_floor:
            return ShatterSelection(
                partition=partition,
                covers=tuple(kept[: resolved.shatter_floor]),
                attempts=attempt,
                failed=False,
            )
    return ShatterSelection(partition=None, covers=(), attempts=resolved.S, failed=True)


def _as_signs(signs_or_instance, m: int | None = None) -> np.ndarray:
    signs = getattr(signs_or_instance, "signs", signs_or_instance)
    arr = np.asarray(signs, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("signs must be one-dimensional")
    if arr.size and not np.all(np.abs(arr) == 1.0):
        raise ValueError("signs must be +-1")
    if m is not None and arr.size != m:
        raise ValueError(f"expected {m} signs, got {arr.size}")
    return arr


def evaluate_noised_polynomial(
    covers: Sequence[Sequence[int]], signs_or_instance, rng, xi=None
) -> float:
    """Sum over covers of prod_{e in C} xi_e * b_e with xi ~ Unif[0, 1]^m.

    ``xi`` can be passed explicitly (shape (m,), entries in [0, 1]) to make
    the statistic deterministic in tests.
    """
    signs = _as_signs(signs_or_instance)
    if xi is None:
        xi = coerce_rng(rng).random(signs.size)
    else:
        xi = np.asarray(xi, dtype=np.float64)
        if xi.shape != signs.shape:
            raise ValueError(f"xi must have shape {signs.shape}, got {xi.shape}")
        if xi.size and (xi.min() < 0.0 or xi.max() > 1.0):
            raise ValueError("xi entries must lie in [0, 1]")
    x = xi * signs
    total = 0.0
    for cover in covers:
        idx = np.asarray(cover, dtype=np.int64)
        if idx.size == 0:
            raise ValueError("covers must be nonempty")
        total += float(np.prod(x[idx]))
    return total


def planted_mean(covers: Sequence[Sequence[int]], rho: float) -> float:
    """Expected statistic under the rho-planted model: sum of (rho/2)^|C|."""
    return float(sum((rho / 2.0) ** len(c) for c in covers))


@dataclass(frozen=True)
class DecisionReport:
    """One distinguishing decision with everything needed to audit it."""

    decision: str
    statistic: float
    threshold: float
    votes: tuple[str, ...]
    statistics: tuple[float, ...]
    thresholds: tuple[float, ...]
    n_selected: int
    selection_attempts: int
    failed_repeats: int


def distinguish(
    covers: Sequence[Sequence[int]],
    signs_or_instance,
    resolved: ResolvedDistinguisher,
    rng,
    xi=None,
) -> DecisionReport:
    """Decide null vs planted from harvested covers and one sign vector.

    Each repeat draws its own equipartition and noise; a repeat votes
    'planted' iff its statistic clears its threshold (non-strict).  Repeats
    where no partition shatters enough covers vote 'fail'.  The decision is
    the majority among non-fail votes, 'fail' if every repeat failed.
    """
    signs = _as_signs(signs_or_instance)
    gen = coerce_rng(rng)
    votes: list[str] = []
    stats: list[float] = []
    cuts: list[float] = []
    attempts_total = 0
    n_selected = 0
    for _ in range(resolved.repeats):
        selection = select_shattered_covers(covers, signs.size, resolved, gen)
        attempts_total += selection.attempts
        if selection.failed:
            votes.append("fail")
            continue
        n_selected = len(selection.covers)
        stat = evaluate_noised_polynomial(selection.covers, signs, gen, xi=xi)
        if resolved.threshold_rule == HALF_PLANTED_MEAN:
            cut = 0.5 * planted_mean(selection.covers, resolved.rho)
        else:
            cut = float(resolved.threshold)
        votes.append("planted" if stat >= cut else "null")
        stats.append(stat)
        cuts.append(cut)
    planted_votes = votes.count("planted")
    null_votes = votes.count("null")
    if planted_votes + null_votes == 0:
        decision = "fail"
    elif planted_votes > null_votes:
        decision = "planted"
    else:
        decision = "null"
    return DecisionReport(
        decision=decision,
        statistic=float(np.median(stats)) if stats else math.nan,
        threshold=float(np.median(cuts)) if cuts else math.nan,
        votes=tuple(votes),
        statistics=tuple(stats),
        thresholds=tuple(cuts),
        n_selected=n_selected,
        selection_attempts=attempts_total,
        failed_repeats=votes.count("fail"),
    )


@dataclass(frozen=True)
class DerivedParams:
    """Parameter wiring from (n, k, m, ell, rho) with feasibility verdicts."""

    n: int
    k: int
    m: int
    ell: int
    rho: float
    delta: float
    c_anti: float
    epsilon: float
    N: int
    d_bar: Fraction
    T_raw: float
    T: int
    required_d_bar: float
    degree_gap: float
    walk_required_d_bar: float
    walk_gap: float
    paper_feasible: bool
    desk_feasible: bool
    notes: tuple[str, ...]

    def summary(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "N": str(self.N),
            "d_bar": float(self.d_bar),
            "T_raw": self.T_raw,
            "T": self.T,
            "required_d_bar": json_safe_float(self.required_d_bar),
            "degree_gap": json_safe_float(self.degree_gap),
            "walk_required_d_bar": json_safe_float(self.walk_required_d_bar),
            "walk_gap": json_safe_float(self.walk_gap),
            "paper_feasible": self.paper_feasible,
            "desk_feasible": self.desk_feasible,
            "notes": list(self.notes),
        }


def derive_theorem_params(
    n: int,
    k: int,
    m: int,
    ell: int,
    rho: float,
    c_anti: float = 2.0,
    delta: float = 0.01,
    noise_exponent: str = "squared",
) -> DerivedParams:
    """Wire rho and the instance shape into (epsilon, T) and degree demands.

    epsilon = 10 * log(1/rho) / log(k); T is 0.4 * epsilon * log2(N) divided
    by log2(10 * c_anti^40 * (2/rho)^2), floored.  noise_exponent='fourth'
    swaps the (2/rho)^2 factor for rho^-4 (the more conservative variant of
    the same bound).  The degree demands reported are the distinguishing
    requirement 120 * epsilon * (10 * c_anti^40 * (2/rho)^2)^(10/epsilon)
    * log2(N) and the walk-collision requirement 300 * N^(4/T) * T.
    """
    if not 0 < rho <= 1:
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    if c_anti <= 1.2:
        raise ValueError(f"c_anti must exceed 1.2, got {c_anti}")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if noise_exponent not in ("squared", "fourth"):
        raise ValueError("noise_exponent must be 'squared' or 'fourth'")
    params = compute_params_from_counts(n, k, m, ell)
    N, d_bar = params.N, params.d_bar
    notes: list[str] = []
    epsilon = 10.0 * math.log(1.0 / rho) / math.log(k)
    if noise_exponent == "squared":
        noise_factor = (2.0 / rho) ** 2
    else:
        noise_factor = rho ** -4
    log2_base = math.log2(10.0 * c_anti ** 40 * noise_factor)
    T_raw = 0.4 * epsilon * big_log(N, 2) / log2_base
    T = int(math.floor(T_raw))
    if epsilon == 0.0:
        notes.append("rho = 1 gives epsilon = 0; the theorem machinery degenerates")
        required = math.inf
    else:
        log_required = (
            math.log(120.0 * epsilon)
            + (10.0 / epsilon) * math.log(10.0 * c_anti ** 40 * noise_factor)
            + math.log(big_log(N, 2))
        )
        required = math.exp(log_required) if log_required < 700 else math.inf
    d_bar_f = float(d_bar)
    degree_gap = d_bar_f / required if required > 0 else math.inf
    if T >= 1:
        walk_required = 300.0 * big_power(N, 4.0 / T) * T
        walk_gap = d_bar_f / walk_required
    else:
        walk_required = math.inf
        walk_gap = 0.0
        notes.append("derived T < 1; no closed-walk length satisfies the wiring")
    threshold_ok = 4.0 * math.log2(1.0 / delta) < T
    if T >= 1 and not threshold_ok:
        notes.append("4 * log2(1/delta) < T fails; confidence target too strict for T")
    paper_feasible = (
        epsilon > 0.0 and T >= 1 and threshold_ok and degree_gap >= 1.0 and walk_gap >= 1.0
    )
    desk_feasible = m >= 1 and d_bar > 0
    if not desk_feasible:
        notes.append("average degree is zero; walks cannot move")
    return DerivedParams(
        n=n,
        k=k,
        m=m,
        ell=ell,
        rho=rho,
        delta=delta,
        c_anti=c_anti,
        epsilon=epsilon,
        N=N,
        d_bar=d_bar,
        T_raw=T_raw,
        T=T,
        required_d_bar=required,
        degree_gap=degree_gap,
        walk_required_d_bar=walk_required,
        walk_gap=walk_gap,
        paper_feasible=paper_feasible,
        desk_feasible=desk_feasible,
        notes=tuple(notes),
    )


def suggest_level(n: int, k: int, m: int, rho: float, c_anti: float = 2.0) -> int:
    """Suggested Kikuchi level for shape (n, k, m) at signal rho, clamped to k.

    Uses the density delta' = m / (n^(k/2) * log2 n); the suggestion grows as
    the instance gets sparser or the signal weaker, and never drops below k.
    """
    if not 0 < rho <= 1:
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    if k < 4:
        return k
    if m < 1:
        raise ValueError("m must be positive to suggest a level")
    density = m / (n ** (k / 2.0) * math.log2(n))
    base = (
        c_anti
        * (math.log(1.0 / rho) / math.log(k))
        / (rho ** 2 * math.comb(k, k // 2))
        / density
    )
    if base <= 0.0:
        return k
    return max(int(math.ceil(base ** (2.0 / (k - 2)))), k)
