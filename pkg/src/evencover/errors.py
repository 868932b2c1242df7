"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "EvenCoverError",
    "CapacityError",
    "IsolatedVertexError",
    "EmptyGraphError",
    "InsufficientCoversError",
]


class EvenCoverError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(EvenCoverError):
    """An exhaustive or materializing operation would exceed its size guard."""


class IsolatedVertexError(EvenCoverError):
    """A walk step was requested from a vertex with no incident hyperedges."""


class EmptyGraphError(EvenCoverError):
    """An operation needs at least one hyperedge (e.g. a degree-weighted draw)."""


class InsufficientCoversError(EvenCoverError):
    """Cover harvesting exhausted its iteration budget below the target.

    The partial results are attached so callers can inspect or salvage them.
    """

    def __init__(self, message: str, covers: list, iterations: int):
        super().__init__(message)
        self.covers = covers
        self.iterations = iterations
