"""Scikit-learn style estimator wrapping harvest + distinguish.

fit() takes the hypergraph (the expensive, sign-independent part: walk
search and cover harvesting); predict() takes a matrix of sign vectors, one
row per instance sharing that hypergraph, and labels each row 'null' or
'planted'.  All randomness derives from random_state, and each row is
decided on its own substream, so predictions are reproducible and
order-independent.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .distinguish import (
    DecisionReport,
    DistinguisherConfig,
    derive_theorem_params,
    distinguish,
    suggest_level,
)
from .hypergraph import Hypergraph, hypergraph_from_dict
from .instances import RngStream, SignedInstance
from .kikuchi import KikuchiGraph
from .walks import WalkSearchConfig, harvest_distinct_covers

__all__ = ["EvenCoverDistinguisher"]


class EvenCoverDistinguisher(ClassifierMixin, BaseEstimator):
    """Classify k-XOR sign vectors as 'null' or 'planted' via even covers.

    Parameters mirror the two pipeline stages.  Walk search: T, beta, c1, L,
    R, target_covers.  Decision: parts, S, shatter_floor, threshold, repeats.
    Leaving a knob at None lets the profile fill it in: 'paper' uses the
    published formulas, 'desk' substitutes bench-scale defaults.  rho is the
    planted signal strength the detector is tuned against.

    Examples
    --------
    >>> est = EvenCoverDistinguisher(ell=2, rho=0.9, T=3, profile="desk",
    ...                              random_state=7)
    >>> est.fit(hypergraph)            # harvests covers, may take a while
    >>> est.predict(sign_matrix)       # array of 'null' / 'planted'
    """

    def __init__(
        self,
        ell: int | None = None,
        rho: float = 0.5,
        T: int | None = None,
        epsilon: float | None = None,
        delta: float = 0.01,
        profile: str = "desk",
        beta: float = 0.05,
        c1: float | None = None,
        L: int | None = None,
        R: int | None = None,
        target_covers: int | None = None,
        parts: int | None = None,
        S: int | None = None,
        s_cap: int = 10**6,
        shatter_floor: int | None = None,
        threshold: float | str | None = None,
        c_anti: float = 2.0,
        repeats: int = 1,
        noise_exponent: str = "squared",
        random_state: int | None = 0,
    ):
        self.ell = ell
        self.rho = rho
        self.T = T
        self.epsilon = epsilon
        self.delta = delta
        self.profile = profile
        self.beta = beta
        self.c1 = c1
        self.L = L
        self.R = R
        self.target_covers = target_covers
        self.parts = parts
        self.S = S
        self.s_cap = s_cap
        self.shatter_floor = shatter_floor
        self.threshold = threshold
        self.c_anti = c_anti
        self.repeats = repeats
        self.noise_exponent = noise_exponent
        self.random_state = random_state

    @staticmethod
    def _as_hypergraph(H) -> Hypergraph:
        if isinstance(H, Hypergraph):
            return H
        if isinstance(H, SignedInstance):
            return H.hypergraph
        if isinstance(H, dict):
            return hypergraph_from_dict(H)
        raise TypeError(
            "fit expects a Hypergraph, a SignedInstance, or a hypergraph dict; "
            f"got {type(H).__name__}"
        )

    def _stream(self) -> RngStream:
        seed = self.random_state if self.random_state is not None else 0
        return RngStream(int(seed))

    def fit(self, H, y=None):
        """Harvest even covers of H; y is ignored (the stage is unsupervised)."""
        h = self._as_hypergraph(H)
        ell = self.ell if self.ell is not None else suggest_level(
            h.n, h.k, h.m, self.rho, self.c_anti
        )
        derived = derive_theorem_params(
            h.n, h.k, h.m, ell, self.rho,
            c_anti=self.c_anti, delta=self.delta, noise_exponent=self.noise_exponent,
        )
        T = self.T if self.T is not None else derived.T
        if T < 1:
            raise ValueError(
                "derived T < 1 for this shape; pass T explicitly "
                f"(wiring gave T_raw = {derived.T_raw:.3g})"
            )
        epsilon = self.epsilon if self.epsilon is not None else derived.epsilon
        desk = self.profile == "desk"
        c1 = self.c1 if self.c1 is not None else (3.0 if desk else 200.0)
        target = self.target_covers
        R = self.R
        if desk:
            if target is None:
                target = 200
            if R is None:
                R = 100 * target
        walk_cfg = WalkSearchConfig(
            T=T, beta=self.beta, c1=c1, L=self.L, R=R,
            target_covers=target, epsilon=epsilon, delta=self.delta,
            profile=self.profile,
        )
        graph = KikuchiGraph(h, ell)
        stream = self._stream()
        harvest = harvest_distinct_covers(graph, walk_cfg, stream.child("fit"))
        # Desk-scale ergonomics: 2T parts make size-2T covers shatter almost
        # never, so small runs get a finer partition and a floor scaled to
        # the harvest.  The paper wiring is untouched when profile='paper'.
        floor = self.shatter_floor
        parts = self.parts
        if desk:
            if parts is None:
                parts = 12 * T
            if floor is None:
                floor = max(1, math.ceil(0.4 * len(harvest.covers)))
        dist_cfg = DistinguisherConfig(
            T=T, rho=self.rho, epsilon=epsilon, delta=self.delta,
            parts=parts, S=self.S, s_cap=self.s_cap,
            shatter_floor=floor, threshold=self.threshold,
            c_anti=self.c_anti, repeats=self.repeats, profile=self.profile,
        )
        self.hypergraph_ = h
        self.ell_ = ell
        self.derived_ = derived
        self.kikuchi_params_ = graph.params
        self.harvest_ = harvest
        self.covers_ = list(harvest.covers)
        self.resolved_ = dist_cfg.resolve(graph.params.N)
        self.classes_ = np.array(["null", "planted"], dtype=object)
        self.n_features_in_ = h.m
        return self

    def _check_fitted(self):
        if not hasattr(self, "covers_"):
            raise NotFittedError("this EvenCoverDistinguisher is not fitted yet")

    def _as_matrix(self, B) -> np.ndarray:
        if isinstance(B, SignedInstance):
            B = B.signs[np.newaxis, :]
        arr = np.asarray(B, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2:
            raise ValueError("expected a 2-d matrix of sign vectors")
        if arr.shape[1] != self.n_features_in_:
            raise ValueError(
                f"each row needs {self.n_features_in_} signs, got {arr.shape[1]}"
            )
        if arr.size and not np.all(np.abs(arr) == 1.0):
            raise ValueError("signs must be +-1")
        return arr

    def decision_reports(self, B) -> list[DecisionReport]:
        """Full audit trail for each row of B, including 'fail' outcomes."""
        self._check_fitted()
        arr = self._as_matrix(B)
        stream = self._stream()
        return [
            distinguish(self.covers_, row, self.resolved_, stream.child("predict", i))
            for i, row in enumerate(arr)
        ]

    def predict(self, B) -> np.ndarray:
        """Label each row of B; rows whose decision fails fall back to 'null'."""
        reports = self.decision_reports(B)
        fails = sum(1 for r in reports if r.decision == "fail")
        if fails:
            warnings.warn(
                f"{fails} row(s) found no shattering partition and default to 'null'",
                stacklevel=2,
            )
        return np.array(
            ["null" if r.decision == "fail" else r.decision for r in reports],
            dtype=object,
        )

    def decision_function(self, B) -> np.ndarray:
        """statistic - threshold per row; positive means 'planted'."""
        reports = self.decision_reports(B)
        return np.array(
            [
                r.statistic - r.threshold if r.decision != "fail" else math.nan
                for r in reports
            ]
        )
