"""Action costs from pairwise "which is harder" judgments (Bradley-Terry MLE)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import InvalidInputError


class UnidentifiableModelError(ValueError):
    """The comparison data admit no finite maximum-likelihood estimate."""


class IterationLimitError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PairwiseComparisons:
    """``wins[i, j]`` counts judgments that item ``i`` is harder (costlier) than item ``j``."""

    wins: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        W = np.asarray(self.wins, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] < 1:
            raise InvalidInputError("wins must be a square matrix")
        if np.any(W < 0) or np.any(W != np.round(W)):
            raise InvalidInputError("wins must be nonnegative integer counts")
        if np.any(np.diag(W) != 0):
            raise InvalidInputError("an item cannot be compared with itself")
        W = W.copy()
        W.setflags(write=False)
        object.__setattr__(self, "wins", W)
        labels = tuple(self.labels) or tuple(f"x{i + 1}" for i in range(W.shape[0]))
        if len(labels) != W.shape[0]:
            raise InvalidInputError("one label per item")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.wins.shape[0]

    @classmethod
    def from_pairs(cls, n: int, pairs, labels=()) -> "PairwiseComparisons":
        """Build from ``(i, j, i_harder_count, j_harder_count)`` tuples with 0-based indices."""
        W = np.zeros((n, n))
        for i, j, a, b in pairs:
            W[i, j] += a
            W[j, i] += b
        return cls(W, tuple(labels))


def _connected(T: np.ndarray) -> bool:
    n = T.shape[0]
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(T[i] > 0):
            if j not in seen:
                seen.add(int(j))
                queue.append(int(j))
    return len(seen) == n


def fit_bradley_terry(comparisons: PairwiseComparisons, tol: float = 1e-10, max_iter: int = 10000) -> np.ndarray:
    """Normalized strengths ``p`` with ``P(i harder than j) = p_i / (p_i + p_j)`` and ``sum(p) = 1``.

    Uses the minorization-maximization fixed point
    ``p_i <- W_i / sum_j n_ij / (p_i + p_j)``, renormalized every sweep.
    """
    W = comparisons.wins
    T = W + W.T
    w = W.sum(axis=1)
    n = comparisons.n
    if n > 1 and not _connected(T):
        raise UnidentifiableModelError("comparison graph is disconnected")
    if n > 1 and np.any(w == 0):
        raise UnidentifiableModelError(f"items {np.flatnonzero(w == 0).tolist()} never win a comparison")
    if n == 1:
        return np.ones(1)

    p = np.full(n, 1.0 / n)
    active = T > 0
    for _ in range(max_iter):
        denom = np.where(active, T / (p[:, None] + p[None, :] + ~active), 0.0).sum(axis=1)
        new = w / denom
        new /= new.sum()
        if np.max(np.abs(new - p)) < tol:
            return new
        p = new
    raise IterationLimitError(f"Bradley-Terry did not converge in {max_iter} iterations")
