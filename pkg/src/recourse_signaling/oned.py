"""Closed forms for the single-feature, single-action credit example.

A subject with score ``x0`` can take ``a1`` (raise the score by ``delta`` at
cost ``cost``, worth 1 to the decision maker) or do nothing.  They are
accepted iff ``x + t >= 0`` for an unknown threshold ``t ~ N(mean, std^2)``.
The threshold splits into three bands:

* L: rejected even after ``a1``
* M: accepted only after ``a1``
* H: accepted regardless

L and H leave the subject with the same incentives, so the general solver
sees them as a single region.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DiscretePrior, Instance, InvalidInputError


def normal_cdf(z: float) -> float:
    """Standard normal CDF via ``erfc`` (no cancellation in the lower tail)."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class OneDExample:
    x0: float
    delta: float
    cost: float
    prior_mean: float
    prior_std: float

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidInputError("delta must be positive")
        if not 0 < self.cost < 2:
            raise InvalidInputError("cost must lie in (0, 2); at 2 or more a1 can never be incentivized")
        if not self.prior_std > 0:
            raise InvalidInputError("prior_std must be positive")


@dataclass(frozen=True)
class RegionProbs:
    pL: float
    pM: float
    pH: float


def region_probs(ex: OneDExample) -> RegionProbs:
    s = ex.prior_std
    if not s > 0:
        raise InvalidInputError("prior_std must be positive")
    pL = normal_cdf((-ex.x0 - ex.delta - ex.prior_mean) / s)
    pH = 1.0 - normal_cdf((-ex.x0 - ex.prior_mean) / s)
    return RegionProbs(pL, 1.0 - pL - pH, pH)


def bic_q(pM: float, cost: float) -> float:
    """Largest probability of recommending ``a1`` outside M that keeps the subject obedient."""
    if not 0 <= pM <= 1:
        raise InvalidInputError("pM must be a probability")
    if not 0 < cost < 2:
        raise InvalidInputError("cost must lie in (0, 2)")
    if pM >= 1:
        return 1
    # Integer literals keep exact inputs (e.g. Fraction) exact.
    q = pM * (2 - cost) / (cost * (1 - pM))
    return min(max(q, 0), 1)


def payoff_row(pM: float, cost: float) -> tuple[float, float, float]:
    """Decision-maker value of (no information, signaling, full information)."""
    # at 2 pM == cost the subject is indifferent and the tie rule picks the null action
    none = 1.0 if 2 * pM > cost else 0.0
    q = bic_q(pM, cost)
    return none, pM + q * (1 - pM), pM


@dataclass(frozen=True)
class UnboundedGap:
    eps: float
    pM: float
    cost: float
    none_value: float
    signaling_value: float
    full_value: float


def unbounded_instance(eps: float) -> UnboundedGap:
    """Parameters where signaling earns ``1 - eps`` and both baselines at most ``eps``."""
    if not 0 < eps < 0.5:
        raise InvalidInputError("eps must lie in (0, 0.5)")
    pM = eps * (1 - eps)
    cost = 2 * eps
    return UnboundedGap(eps, pM, cost, 0.0, 1 - eps, pM)


def discretize_probs(x0: float, delta: float, cost: float, probs: RegionProbs, spread: float | None = None):
    """Three-point prior with masses ``(pL, pM, pH)`` on one threshold inside each band.

    Zero-mass bands are dropped from the support.
    """
    spread = delta if spread is None else spread
    inst = Instance.build([x0], [{"label": "a1", "delta_x": [delta], "cost": cost, "dm_utility": 1.0}])
    thresholds = [-x0 - delta - spread, -x0 - delta / 2.0, -x0 + spread]
    masses = [probs.pL, probs.pM, probs.pH]
    support = [[1.0, t] for t, m in zip(thresholds, masses) if m > 0]
    weights = np.array([m for m in masses if m > 0])
    return inst, DiscretePrior(support, weights / weights.sum())


def discretize(ex: OneDExample):
    return discretize_probs(ex.x0, ex.delta, ex.cost, region_probs(ex), spread=ex.prior_std)
