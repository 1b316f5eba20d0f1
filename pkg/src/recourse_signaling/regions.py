"""Equivalence regions of assessment rules.

Two rules are indistinguishable to the subject when every pairwise difference
of the subject's utilities agrees.  Utilities only see the sign of each
action's score, so a region is identified by its vector of per-action
classification outcomes.  The only distinct outcome vectors that are
equivalent are all-negative and all-positive (every difference shifts by the
same constant), and we store that class as all-positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DiscretePrior, Instance, InvalidInputError, draw


@dataclass(frozen=True, order=True)
class RegionKey:
    outcomes: tuple[bool, ...]

    def __post_init__(self):
        outs = tuple(bool(o) for o in self.outcomes)
        if not any(outs):
            outs = (True,) * len(outs)
        object.__setattr__(self, "outcomes", outs)

    @classmethod
    def from_bits(cls, bits: str) -> "RegionKey":
        if not bits or set(bits) - {"0", "1"}:
            raise InvalidInputError(f"bad region bitstring {bits!r}")
        return cls(tuple(b == "1" for b in bits))

    @property
    def bits(self) -> str:
        return "".join("1" if o else "0" for o in self.outcomes)

    def __str__(self) -> str:
        return self.bits

    def as_array(self) -> np.ndarray:
        return np.array(self.outcomes, dtype=bool)


@dataclass(frozen=True)
class Region:
    key: RegionKey
    mass: float
    members: tuple[int, ...] = field(default=(), compare=False)


def canonical_outcomes(outcomes: np.ndarray) -> np.ndarray:
    """Row-wise canonicalization of a boolean ``(n, m+1)`` outcome matrix."""
    out = np.array(outcomes, dtype=bool, copy=True)
    out[~out.any(axis=-1)] = True
    return out


def region_key(instance: Instance, theta) -> RegionKey:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1:
        raise InvalidInputError("theta must be a single vector")
    return RegionKey(tuple(instance.outcomes(theta)))


def group_outcomes(instance: Instance, thetas: np.ndarray, weights: np.ndarray) -> list[Region]:
    """Group rules by canonical key and accumulate their weights, in key order."""
    outs = canonical_outcomes(instance.outcomes(np.atleast_2d(thetas)))
    uniq, inverse = np.unique(outs, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    masses = np.bincount(inverse, weights=weights, minlength=len(uniq))
    regions = []
    for r, row in enumerate(uniq):
        members = tuple(int(i) for i in np.flatnonzero(inverse == r))
        regions.append(Region(RegionKey(tuple(row)), float(masses[r]), members))
    # np.unique sorts rows lexicographically with False < True, matching RegionKey order.
    return regions


def enumerate_regions(instance: Instance, prior: DiscretePrior) -> list[Region]:
    if prior.dim != instance.dim + 1:
        raise InvalidInputError(f"prior rules have length {prior.dim}, expected {instance.dim + 1}")
    return group_outcomes(instance, prior.support, prior.probs)


def is_dominated(instance: Instance, a: int, a_prime: int) -> bool:
    """True when ``a``'s feature change is componentwise <= ``a_prime``'s with one strict coordinate."""
    da = instance.actions[instance._check_action(a)].delta_x
    db = instance.actions[instance._check_action(a_prime)].delta_x
    return bool(np.all(da <= db) and np.any(da < db))


def theoretical_region_count(m_per_feature) -> int:
    """Closed-form region count ``prod(m_i) - 1`` for one-feature-per-action menus.

    Returned verbatim.  Brute-force counts under the canonical key differ:
    with ``k_i`` actions on feature ``i`` and nonnegative weights one sees
    ``prod(k_i + 1)`` regions (e.g. 4 for one action on each of two
    features).  :func:`empirical_region_count` is the ground truth.
    """
    m = [int(v) for v in m_per_feature]
    if not m:
        raise InvalidInputError("need at least one feature")
    if any(v < 1 for v in m):
        raise InvalidInputError("counts must be positive")
    return math.prod(m) - 1


def empirical_region_count(instance: Instance, sampler, n: int, seed: int) -> int:
    """Number of distinct canonical keys among ``n`` rules drawn with ``seed``."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    thetas = draw(sampler, np.random.default_rng(seed), n)
    outs = canonical_outcomes(instance.outcomes(thetas))
    return int(np.unique(outs, axis=0).shape[0])
