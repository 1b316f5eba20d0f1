"""Sampling-based approximately optimal, approximately BIC signaling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Instance, InvalidInputError, PreconditionError, SignalingPolicy, draw
from .exact import honest_actions, incentive_matrix, solve_regions
from .regions import Region, group_outcomes, region_key


@dataclass(frozen=True, eq=False)
class ApproxReport:
    recommendation_dist: np.ndarray
    true_region: Region
    sampled_regions: list[Region]
    policy: SignalingPolicy
    lp_value: float
    epsilon: float
    delta: float
    K: int
    seed: int


def sample_count(epsilon: float, delta: float, m: int) -> int:
    """Samples needed for ``epsilon`` accuracy w.p. ``1 - delta`` with ``m`` actions (null included)."""
    if not 0 < epsilon <= 1 or not 0 < delta <= 1:
        raise InvalidInputError("epsilon and delta must lie in (0, 1]")
    if int(m) < 1:
        raise InvalidInputError("m must be at least 1")
    m = int(m)
    return math.ceil(2.0 / epsilon**2 * math.log(2.0 * (m * m + 1) / delta))


def approximate_policy(instance: Instance, sampler, theta_true, epsilon: float, delta: float, seed: int) -> ApproxReport:
    """Recommendation distribution for ``theta_true`` from an epsilon-relaxed program on samples.

    ``theta_true`` replaces a uniformly chosen sample slot, so its region is
    always among the sampled ones.  The slot index is drawn first from the
    seeded generator, then the remaining ``K - 1`` rules.
    """
    u = instance.dm_utilities
    if np.any(u < 0) or np.any(u > 1):
        raise PreconditionError("decision-maker utilities must lie in [0, 1]; rescale the instance first")
    theta_true = np.asarray(theta_true, dtype=float)
    K = sample_count(epsilon, delta, instance.n_actions)
    rng = np.random.default_rng(seed)
    slot = int(rng.integers(K))
    others = draw(sampler, rng, K - 1) if K > 1 else np.zeros((0, theta_true.shape[0]))
    thetas = np.insert(others, slot, theta_true, axis=0)

    counts = group_outcomes(instance, thetas, np.ones(K))
    regions = [Region(r.key, r.mass / K, r.members) for r in counts]
    policy, value = solve_regions(instance, regions, epsilon)
    true_key = region_key(instance, theta_true)
    true_region = next(r for r in regions if r.key == true_key)
    return ApproxReport(
        recommendation_dist=policy.row(true_key).copy(),
        true_region=true_region,
        sampled_regions=regions,
        policy=policy,
        lp_value=value,
        epsilon=epsilon,
        delta=delta,
        K=K,
        seed=seed,
    )


def verify_eps_bic(instance: Instance, report: ApproxReport, full_policy: SignalingPolicy | None = None) -> float:
    """Smallest empirical incentive slack ``sum_R p(a|R) p~(R) (u(a,R) - u(a',R))``.

    The policy is epsilon-BIC when this is at least ``-epsilon``.
    """
    policy = report.policy if full_policy is None else full_policy
    regions = report.sampled_regions
    if len(policy.regions) != len(regions) or any(r.key not in policy for r in regions):
        raise InvalidInputError("policy does not match the sampled regions")
    M = incentive_matrix(instance, regions, policy)
    off = ~np.eye(instance.n_actions, dtype=bool)
    return float(M[off].min()) if off.any() else 0.0


def large_or_honest_policy(instance: Instance, regions, optimal: SignalingPolicy, epsilon: float) -> SignalingPolicy:
    """Reroute every signal sent with total probability at most ``epsilon / (2m)`` to the honest action.

    ``m`` counts all actions, null included.
    """
    keys = [r.key for r in regions]
    P = optimal.rows(keys).copy()
    mass = np.array([r.mass for r in regions])
    threshold = epsilon / (2 * instance.n_actions)
    small = mass @ P <= threshold
    honest = honest_actions(instance, regions)
    out = P.copy()
    out[:, small] = 0.0
    moved = P[:, small].sum(axis=1)
    out[np.arange(len(regions)), honest] += moved
    return SignalingPolicy(tuple(keys), out)

