"""Small shared helpers: RNG coercion, big-integer powers, canonical JSON."""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

import numpy as np

__all__ = [
    "coerce_rng",
    "stable_label_id",
    "big_power",
    "big_log",
    "json_safe_float",
    "canonical_json",
    "strip_volatile",
    "report_digest",
]

# Report keys that may differ between otherwise identical runs.
VOLATILE_KEYS = frozenset({"seconds", "timings", "wall_seconds", "started_at"})


def coerce_rng(rng: Any) -> np.random.Generator:
    """Return a numpy Generator from a Generator, RngStream, SeedSequence, or int.

    None yields a freshly seeded generator, which is not reproducible; every
    code path in this package that cares about replay passes an explicit
    stream instead.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if hasattr(rng, "generator"):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng))
    if isinstance(rng, np.random.SeedSequence) or rng is None:
        return np.random.default_rng(rng)
    raise TypeError(f"cannot build a random generator from {type(rng).__name__}")


def stable_label_id(label: str) -> int:
    """Map a text label to a fixed 63-bit integer, stable across processes."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def big_log(value: int | float, base: float = math.e) -> float:
    """log(value) that accepts arbitrarily large integers."""
    if value <= 0:
        raise ValueError("logarithm needs a positive argument")
    return math.log(value) / math.log(base) if base != math.e else math.log(value)


def big_power(value: int | float, exponent: float) -> float:
    """value ** exponent via exp/log so huge integer bases do not overflow.

    Results beyond float range come back as inf; callers that budget walks
    or iterations cap such values rather than crash.
    """
    if value < 0:
        raise ValueError("negative base")
    if value == 0:
        return 0.0 if exponent > 0 else 1.0
    try:
        return math.exp(exponent * math.log(value))
    except OverflowError:
        return math.inf


def json_safe_float(value: float) -> float | None:
    """A float fit for strict JSON: non-finite values become None."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys and fixed separators for byte-stable output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def strip_volatile(obj: Any) -> Any:
    """Recursively drop timing-like keys so digests ignore wall-clock noise."""
    if isinstance(obj, dict):
        return {k: strip_volatile(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [strip_volatile(v) for v in obj]
    return obj


def report_digest(report: dict) -> str:
    """SHA-256 of the canonical JSON form with volatile keys removed."""
    return hashlib.sha256(canonical_json(strip_volatile(report)).encode("utf-8")).hexdigest()
