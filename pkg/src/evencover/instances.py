"""Reproducible sampling of hypergraphs and signed instances.

Signs follow the planted k-XOR model: under the null, each edge sign is an
independent fair coin; under the rho-planted model the sign of edge e is
eta_e * prod_{v in e} z_v for a hidden assignment z in {-1,+1}^n and
independent noise coins eta_e with mean rho.  Even-cover sign products cancel
the z part, which is the whole trick downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import CapacityError
from .hypergraph import Hypergraph, hypergraph_from_dict, hypergraph_to_dict, verify_even_cover
from .utils import coerce_rng, stable_label_id

__all__ = [
    "RngStream",
    "GroundTruth",
    "SignedInstance",
    "sample_null_signs",
    "sample_planted_signs",
    "planted_sign_matrix",
    "sample_uniform_hypergraph",
    "even_cover_sign_product",
    "instance_to_dict",
    "instance_from_dict",
    "load_instance",
    "save_instance",
]

REJECTION_ATTEMPTS_PER_EDGE = 100


@dataclass(frozen=True)
class RngStream:
    """A named, forkable random stream: (seed, path) -> numpy Generator.

    Identical (seed, path) pairs replay identical randomness; ``child``
    derives statistically independent substreams without coordination.
    String labels are hashed to fixed integers so stream layouts can be
    self-documenting.
    """

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *labels: int | str) -> "RngStream":
        suffix = tuple(
            stable_label_id(lbl) if isinstance(lbl, str) else int(lbl) for lbl in labels
        )
        for part in suffix:
            if part < 0:
                raise ValueError("stream path entries must be nonnegative")
        return RngStream(self.seed, self.path + suffix)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class GroundTruth:
    """What the sampler knows: the label, and for planted data z and rho."""

    label: str
    rho: float = 0.0
    z: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.label not in ("null", "planted"):
            raise ValueError(f"label must be 'null' or 'planted', got {self.label!r}")


@dataclass(frozen=True)
class SignedInstance:
    """A hypergraph together with one +-1 sign per edge."""

    hypergraph: Hypergraph
    signs: np.ndarray
    ground_truth: GroundTruth | None = None

    def __post_init__(self):
        signs = np.asarray(self.signs, dtype=np.int8)
        if signs.shape != (self.hypergraph.m,):
            raise ValueError(
                f"signs must have shape ({self.hypergraph.m},), got {signs.shape}"
            )
        if signs.size and not np.all(np.abs(signs) == 1):
            raise ValueError("signs must be +-1")
        object.__setattr__(self, "signs", signs)


def _check_assignment(z: Any, n: int) -> np.ndarray:
    arr = np.asarray(z, dtype=np.int8)
    if arr.shape != (n,):
        raise ValueError(f"z must have shape ({n},), got {arr.shape}")
    if arr.size and not np.all(np.abs(arr) == 1):
        raise ValueError("z entries must be +-1")
    return arr


def sample_null_signs(h: Hypergraph, rng) -> SignedInstance:
    """Independent fair +-1 signs for every edge."""
    gen = coerce_rng(rng)
    signs = gen.integers(0, 2, size=h.m).astype(np.int8) * 2 - 1
    return SignedInstance(h, signs, GroundTruth(label="null"))


def sample_planted_signs(h: Hypergraph, z, rho: float, rng) -> SignedInstance:
    """Signs b_e = eta_e * prod_{v in e} z_v with E[eta_e] = rho.

    eta_e is +1 with probability (1 + rho)/2, so rho = 1 gives noiseless
    parities of z and rho = 0 degenerates to the null model.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    zz = _check_assignment(z, h.n)
    gen = coerce_rng(rng)
    eta = np.where(gen.random(h.m) < (1.0 + rho) / 2.0, 1, -1).astype(np.int8)
    if h.m:
        edge_array = np.array(h.edges, dtype=np.int64)
        chi = np.prod(zz[edge_array], axis=1).astype(np.int8)
    else:
        chi = np.ones(0, dtype=np.int8)
    truth = GroundTruth(label="planted", rho=float(rho), z=tuple(int(v) for v in zz))
    return SignedInstance(h, eta * chi, truth)


def planted_sign_matrix(h: Hypergraph, z, rho: float, rng, size: int) -> np.ndarray:
    """``size`` independent planted sign vectors as a (size, m) int8 matrix.

    Batch counterpart of sample_planted_signs for statistical tests that
    resample many times; one vectorized draw replaces ``size`` scalar calls.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    zz = _check_assignment(z, h.n)
    gen = coerce_rng(rng)
    eta = np.where(gen.random((size, h.m)) < (1.0 + rho) / 2.0, 1, -1).astype(np.int8)
    if h.m:
        edge_array = np.array(h.edges, dtype=np.int64)
        chi = np.prod(zz[edge_array], axis=1).astype(np.int8)
        return eta * chi[np.newaxis, :]
    return eta


def sample_uniform_hypergraph(n: int, k: int, m: int, rng) -> Hypergraph:
    """m distinct k-subsets of range(n), uniform over all such hypergraphs.

    Rejection sampling with a budget of 100 draws per requested edge; asking
    for more edges than C(n, k) raises immediately.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    total = math.comb(n, k)
    if m > total:
        raise CapacityError(f"cannot draw {m} distinct edges from {total} possible")
    gen = coerce_rng(rng)
    edges: set[tuple[int, ...]] = set()
    budget = REJECTION_ATTEMPTS_PER_EDGE * max(m, 1)
    attempts = 0
    while len(edges) < m:
        if attempts >= budget:
            raise CapacityError(
                f"rejection sampling stalled after {attempts} draws "
                f"({len(edges)}/{m} edges, {total} possible)"
            )
        attempts += 1
        edge = tuple(sorted(int(v) for v in gen.choice(n, size=k, replace=False)))
        edges.add(edge)
    return Hypergraph(n, k, sorted(edges))


def even_cover_sign_product(instance: SignedInstance, cover) -> int:
    """prod_{e in cover} b_e, defined only when cover is a genuine even cover."""
    idx = tuple(int(i) for i in cover)
    if not verify_even_cover(instance.hypergraph, idx):
        raise ValueError(f"{idx} is not an even cover of this hypergraph")
    return int(np.prod(instance.signs[list(idx)]))


def instance_to_dict(instance: SignedInstance) -> dict:
    """JSON form: the hypergraph schema plus signs and optional ground truth.

    Note the edge list is written in canonical order, so signs are permuted
    to match whenever the in-memory edge order differs.
    """
    h = instance.hypergraph
    order = sorted(range(h.m), key=lambda i: h.edges[i])
    data = hypergraph_to_dict(h)
    data["signs"] = [int(instance.signs[i]) for i in order]
    if instance.ground_truth is not None:
        gt: dict[str, Any] = {"label": instance.ground_truth.label}
        if instance.ground_truth.label == "planted":
            gt["rho"] = instance.ground_truth.rho
            gt["z"] = list(instance.ground_truth.z) if instance.ground_truth.z else None
        data["ground_truth"] = gt
    return data


def instance_from_dict(data: dict) -> SignedInstance:
    h = hypergraph_from_dict(data)
    if "signs" not in data:
        raise ValueError("instance JSON missing 'signs'")
    signs = np.asarray(data["signs"], dtype=np.int8)
    truth = None
    if "ground_truth" in data and data["ground_truth"] is not None:
        gt = data["ground_truth"]
        z = tuple(int(v) for v in gt["z"]) if gt.get("z") is not None else None
        truth = GroundTruth(label=gt["label"], rho=float(gt.get("rho", 0.0)), z=z)
    return SignedInstance(h, signs, truth)


def load_instance(path: str | Path) -> SignedInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))


def save_instance(instance: SignedInstance, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2)
        fh.write("\n")
