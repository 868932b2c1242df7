"""Experiment orchestration: config, paired trials, reports, feasibility.

A run samples (or loads) one hypergraph, harvests covers once, then decides
paired null/planted sign vectors for each trial.  The null and planted
decision of a trial share one randomness substream, so they see the same
partition and noise draws and differ only in the signs; that pairing makes
small accuracy comparisons much less noisy.  Reports are plain dicts that
serialize canonically, with wall-clock fields excluded from the digest.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .distinguish import (
    DistinguisherConfig,
    derive_theorem_params,
    distinguish,
    suggest_level,
)
from .errors import InsufficientCoversError
from .hypergraph import Hypergraph, hypergraph_from_dict
from .instances import (
    RngStream,
    sample_null_signs,
    sample_planted_signs,
    sample_uniform_hypergraph,
)
from .kikuchi import KikuchiGraph, compute_params_from_counts
from .utils import json_safe_float, report_digest
from .walks import WalkSearchConfig, harvest_distinct_covers

__all__ = [
    "ExperimentConfig",
    "run_experiment",
    "check_feasibility",
    "write_trials_csv",
    "REPORT_SCHEMA",
]

REPORT_SCHEMA = 1
CSV_COLUMNS = [
    "trial",
    "label",
    "decision",
    "statistic",
    "threshold",
    "covers_found",
    "harvest_iters",
    "seconds",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; None leaves a knob to profile defaults.

    Exactly one of m and density must be set unless instance_path is given;
    density means m = ceil(density * n^(k/2) * log2 n).
    """

    n: int
    k: int
    ell: int
    rho: float
    seed: int
    trials: int = 20
    m: int | None = None
    density: float | None = None
    instance_path: str | None = None
    profile: str = "desk"
    T: int | None = None
    beta: float = 0.05
    c1: float | None = None
    L: int | None = None
    R: int | None = None
    target_covers: int | None = None
    parts: int | None = None
    S: int | None = None
    s_cap: int = 10**6
    shatter_floor: int | None = None
    threshold: float | str | None = None
    epsilon: float | None = None
    delta: float = 0.01
    c_anti: float = 2.0
    repeats: int = 1
    noise_exponent: str = "squared"

    def __post_init__(self):
        if self.profile not in ("paper", "desk"):
            raise ValueError(f"profile must be 'paper' or 'desk', got {self.profile!r}")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        if self.instance_path is None:
            if (self.m is None) == (self.density is None):
                raise ValueError("set exactly one of m and density")
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")

    def edge_count(self) -> int:
        if self.m is not None:
            return self.m
        return int(math.ceil(self.density * self.n ** (self.k / 2.0) * math.log2(self.n)))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _effective_params(cfg: ExperimentConfig, n: int, k: int, m: int):
    derived = derive_theorem_params(
        n, k, m, cfg.ell, cfg.rho,
        c_anti=cfg.c_anti, delta=cfg.delta, noise_exponent=cfg.noise_exponent,
    )
    T = cfg.T if cfg.T is not None else derived.T
    epsilon = cfg.epsilon if cfg.epsilon is not None else derived.epsilon
    return derived, T, epsilon


def check_feasibility(cfg: ExperimentConfig) -> dict:
    """Parameter wiring and degree requirements for both profiles, as a dict."""
    n, k, m = cfg.n, cfg.k, cfg.edge_count()
    derived, T, epsilon = _effective_params(cfg, n, k, m)
    suggestion = suggest_level(n, k, m, cfg.rho, cfg.c_anti)
    params = compute_params_from_counts(n, k, m, cfg.ell)
    profile_feasible = (
        derived.paper_feasible if cfg.profile == "paper" else derived.desk_feasible and T >= 1
    )
    return {
        "n": n,
        "k": k,
        "m": m,
        "ell": cfg.ell,
        "rho": cfg.rho,
        "profile": cfg.profile,
        "N": params.N,
        "d_bar": float(params.d_bar),
        "d_bar_exact": f"{params.d_bar.numerator}/{params.d_bar.denominator}",
        "epsilon": epsilon,
        "T_raw": derived.T_raw,
        "T": T,
        "required_d_bar_distinguish": json_safe_float(derived.required_d_bar),
        "degree_gap_distinguish": json_safe_float(derived.degree_gap),
        "required_d_bar_walks": json_safe_float(derived.walk_required_d_bar),
        "degree_gap_walks": json_safe_float(derived.walk_gap),
        "suggested_ell": suggestion,
        "ell_within_sqrt_n": cfg.ell <= math.isqrt(cfg.n),
        "paper_feasible": derived.paper_feasible,
        "desk_feasible": derived.desk_feasible and T >= 1,
        "feasible": profile_feasible,
        "notes": list(derived.notes),
    }


def _load_hypergraph_file(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return hypergraph_from_dict(json.load(fh))


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run the full pipeline; always returns a report dict.

    report['status'] is 'ok', 'infeasible' (parameters fail the profile's
    requirements; no trials run), or 'harvest_failure' (iteration budget
    exhausted; partial harvest stats included).
    """
    t_start = time.perf_counter()
    root = RngStream(cfg.seed)
    report: dict = {"schema": REPORT_SCHEMA, "config": cfg.to_dict()}

    t0 = time.perf_counter()
    if cfg.instance_path is not None:
        h = _load_hypergraph_file(cfg.instance_path)
        source = cfg.instance_path
    else:
        h = sample_uniform_hypergraph(cfg.n, cfg.k, cfg.edge_count(), root.child("hypergraph"))
        source = "sampled"
    gen_seconds = time.perf_counter() - t0
    report["hypergraph"] = {"n": h.n, "k": h.k, "m": h.m, "source": source}

    derived, T, epsilon = _effective_params(cfg, h.n, h.k, h.m)
    feasibility = check_feasibility(
        cfg if cfg.instance_path is None
        else ExperimentConfig(**{**cfg.to_dict(), "instance_path": None, "m": h.m,
                                 "density": None, "n": h.n, "k": h.k})
    )
    report["feasibility"] = feasibility
    if not feasibility["feasible"]:
        report["status"] = "infeasible"
        report["trials"] = []
        report["aggregate"] = None
        report["timings"] = {
            "gen_seconds": gen_seconds,
            "harvest_seconds": 0.0,
            "distinguish_seconds": 0.0,
            "wall_seconds": time.perf_counter() - t_start,
        }
        report["digest"] = report_digest(report)
        return report

    desk = cfg.profile == "desk"
    c1 = cfg.c1 if cfg.c1 is not None else (3.0 if desk else 200.0)
    target = cfg.target_covers
    R = cfg.R
    if desk:
        if target is None:
            target = 200
        if R is None:
            R = 100 * target
    walk_cfg = WalkSearchConfig(
        T=T, beta=cfg.beta, c1=c1, L=cfg.L, R=R, target_covers=target,
        epsilon=epsilon, delta=cfg.delta, profile=cfg.profile,
    )
    graph = KikuchiGraph(h, cfg.ell)
    resolved_walk = walk_cfg.resolve(graph.params)
    report["derived"] = {
        "epsilon": epsilon,
        "T": T,
        "N": graph.params.N,
        "d_bar": float(graph.params.d_bar),
        "L": resolved_walk.L,
        "R": resolved_walk.R,
        "target_covers": resolved_walk.target_covers,
    }

    t0 = time.perf_counter()
    try:
        harvest = harvest_distinct_covers(graph, walk_cfg, root.child("harvest"))
    except InsufficientCoversError as exc:
        report["status"] = "harvest_failure"
        report["harvest"] = {
            "covers_found": len(exc.covers),
            "iterations": exc.iterations,
            "target": resolved_walk.target_covers,
            "error": str(exc),
        }
        report["trials"] = []
        report["aggregate"] = None
        report["timings"] = {
            "gen_seconds": gen_seconds,
            "harvest_seconds": time.perf_counter() - t0,
            "distinguish_seconds": 0.0,
            "wall_seconds": time.perf_counter() - t_start,
        }
        report["digest"] = report_digest(report)
        return report
    harvest_seconds = time.perf_counter() - t0

    sizes: dict[str, int] = {}
    for cover in harvest.covers:
        key = str(len(cover))
        sizes[key] = sizes.get(key, 0) + 1
    report["harvest"] = {
        "covers_found": len(harvest.covers),
        "iterations": harvest.iterations,
        "collisions": harvest.collisions,
        "trivial": harvest.trivial,
        "duplicates": harvest.duplicates,
        "target": harvest.target,
        "size_histogram": sizes,
    }

    # Desk ergonomics mirror the estimator: a finer partition than 2T parts
    # and a harvest-scaled floor, since the paper defaults only separate at
    # astronomical N.
    floor = cfg.shatter_floor
    parts = cfg.parts
    if desk:
        if parts is None:
            parts = 12 * T
        if floor is None:
            floor = max(1, math.ceil(0.4 * len(harvest.covers)))
    dist_cfg = DistinguisherConfig(
        T=T, rho=cfg.rho, epsilon=epsilon, delta=cfg.delta,
        parts=parts, S=cfg.S, s_cap=cfg.s_cap, shatter_floor=floor,
        threshold=cfg.threshold, c_anti=cfg.c_anti, repeats=cfg.repeats,
        profile=cfg.profile,
    )
    resolved = dist_cfg.resolve(graph.params.N)
    report["derived"]["parts"] = resolved.parts
    report["derived"]["S"] = resolved.S
    report["derived"]["shatter_floor"] = resolved.shatter_floor
    report["derived"]["threshold_rule"] = resolved.threshold_rule
    if resolved.threshold is not None:
        report["derived"]["threshold"] = resolved.threshold

    t0 = time.perf_counter()
    rows = []
    correct = {"null": 0, "planted": 0}
    fails = 0
    for i in range(cfg.trials):
        z = (root.child("z", i).generator().integers(0, 2, size=h.n) * 2 - 1).astype(np.int8)
        null_inst = sample_null_signs(h, root.child("signs", i, 0))
        planted_inst = sample_planted_signs(h, z, cfg.rho, root.child("signs", i, 1))
        for label, inst in (("null", null_inst), ("planted", planted_inst)):
            t_trial = time.perf_counter()
            decision = distinguish(
                harvest.covers, inst, resolved, root.child("decide", i)
            )
            rows.append(
                {
                    "trial": i,
                    "label": label,
                    "decision": decision.decision,
                    # fail rows carry NaN statistics; None keeps the JSON strict
                    "statistic": json_safe_float(decision.statistic),
                    "threshold": json_safe_float(decision.threshold),
                    "covers_found": len(harvest.covers),
                    "harvest_iters": harvest.iterations,
                    "seconds": time.perf_counter() - t_trial,
                }
            )
            if decision.decision == label:
                correct[label] += 1
            if decision.decision == "fail":
                fails += 1
    distinguish_seconds = time.perf_counter() - t0

    decisions = 2 * cfg.trials
    report["status"] = "ok"
    report["trials"] = rows
    report["aggregate"] = {
        "trials": cfg.trials,
        "decisions": decisions,
        "correct": correct["null"] + correct["planted"],
        "accuracy": (correct["null"] + correct["planted"]) / decisions if decisions else None,
        "null_correct": correct["null"],
        "planted_correct": correct["planted"],
        "fails": fails,
    }
    report["timings"] = {
        "gen_seconds": gen_seconds,
        "harvest_seconds": harvest_seconds,
        "distinguish_seconds": distinguish_seconds,
        "wall_seconds": time.perf_counter() - t_start,
    }
    report["digest"] = report_digest(report)
    return report


def write_trials_csv(report: dict, path: str | Path) -> None:
    """One row per decision, fixed column order, stable formatting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in report.get("trials", []):
            writer.writerow({col: repr(row[col]) if isinstance(row[col], float) else row[col]
                             for col in CSV_COLUMNS})
