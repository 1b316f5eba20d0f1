"""Optimal BIC signaling for a discrete prior, plus the two disclosure baselines."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DiscretePrior, Instance, InvalidInputError, SignalingPolicy, SolverStallError, subject_utilities
from .lp import LpProblem, Status, solve
from .regions import Region, enumerate_regions

BIC_TOL = 1e-7
TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SolveReport:
    policy: SignalingPolicy
    dm_value: float
    bic_slack: float
    region_masses: list[float]
    regions: list[Region]


def region_utilities(instance: Instance, regions) -> np.ndarray:
    """Subject utility table, shape ``(|regions|, m+1)``."""
    outs = np.array([r.key.outcomes for r in regions], dtype=bool).reshape(len(regions), instance.n_actions)
    return subject_utilities(instance, outs)


def best_response(instance: Instance, utilities: np.ndarray) -> int:
    """Subject's argmax; ties go to the cheapest action, then the lowest id."""
    top = utilities.max()
    tied = np.flatnonzero(utilities >= top - TIE_TOL)
    return int(min(tied, key=lambda a: (instance.costs[a], a)))


def _incentive_rows(instance: Instance, regions, epsilon: float = 0.0) -> np.ndarray:
    """BIC rows as a ``((m+1)^2, |R|*(m+1))`` matrix, variables region-major.

    Row ``a*(m+1) + a'`` holds the coefficient of ``p(sigma=a | R)``:
    ``p(R) * (u(a,R) - u(a',R) + epsilon)``.
    """
    U = region_utilities(instance, regions)
    mass = np.array([r.mass for r in regions])
    n_a = instance.n_actions
    G = np.zeros((n_a * n_a, len(regions) * n_a))
    for a in range(n_a):
        for b in range(n_a):
            if a == b:
                continue
            G[a * n_a + b, a::n_a] = mass * (U[:, a] - U[:, b] + epsilon)
    return G


def build_lp(instance: Instance, regions, epsilon: float = 0.0) -> LpProblem:
    if not regions:
        raise InvalidInputError("cannot build a program over zero regions")
    n_a = instance.n_actions
    n_r = len(regions)
    mass = np.array([r.mass for r in regions])
    objective = np.outer(mass, instance.dm_utilities).reshape(-1)
    G = _incentive_rows(instance, regions, epsilon)
    A = np.kron(np.eye(n_r), np.ones((1, n_a)))
    return LpProblem(objective, G, np.zeros(G.shape[0]), A, np.ones(n_r))


def build_opt_lp(instance: Instance, regions) -> LpProblem:
    """OPT-LP over the given regions (vacuous ``a == a'`` rows are kept as zero rows)."""
    mass = sum(r.mass for r in regions)
    if regions and abs(mass - 1.0) > 1e-9:
        raise InvalidInputError(f"region masses sum to {mass}, not 1")
    return build_lp(instance, regions)


def policy_from_solution(instance: Instance, regions, x) -> SignalingPolicy:
    P = np.clip(np.asarray(x).reshape(len(regions), instance.n_actions), 0.0, None)
    P /= P.sum(axis=1, keepdims=True)
    return SignalingPolicy(tuple(r.key for r in regions), P)


def solve_regions(instance: Instance, regions, epsilon: float = 0.0):
    """Solve the (possibly epsilon-relaxed) program; returns ``(policy, lp_value)``."""
    sol = solve(build_lp(instance, regions, epsilon))
    if sol.status is not Status.OPTIMAL:
        # Honest and prior-best constant policies are always feasible, so this is numerical trouble.
        raise SolverStallError(f"signaling program reported {sol.status.value}")
    return policy_from_solution(instance, regions, sol.x), sol.value


def solve_optimal_policy(instance: Instance, prior: DiscretePrior) -> SolveReport:
    regions = [r for r in enumerate_regions(instance, prior) if r.mass > 0]
    policy, _ = solve_regions(instance, regions)
    return SolveReport(
        policy=policy,
        dm_value=expected_dm_utility(instance, regions, policy),
        bic_slack=verify_bic(instance, regions, policy),
        region_masses=[r.mass for r in regions],
        regions=regions,
    )


def honest_actions(instance: Instance, regions) -> list[int]:
    U = region_utilities(instance, regions)
    return [best_response(instance, row) for row in U]


def honest_policy(instance: Instance, regions) -> SignalingPolicy:
    P = np.zeros((len(regions), instance.n_actions))
    P[np.arange(len(regions)), honest_actions(instance, regions)] = 1.0
    return SignalingPolicy(tuple(r.key for r in regions), P)


def full_information_value(instance: Instance, prior: DiscretePrior) -> float:
    regions = enumerate_regions(instance, prior)
    acts = honest_actions(instance, regions)
    return float(sum(r.mass * instance.dm_utilities[a] for r, a in zip(regions, acts)))


def prior_best_action(instance: Instance, regions) -> int:
    mass = np.array([r.mass for r in regions])
    return best_response(instance, mass @ region_utilities(instance, regions))


def no_information_value(instance: Instance, prior: DiscretePrior) -> tuple[int, float]:
    a = prior_best_action(instance, enumerate_regions(instance, prior))
    return a, float(instance.dm_utilities[a])


def incentive_matrix(instance: Instance, regions, policy: SignalingPolicy) -> np.ndarray:
    """``M[a, a'] = sum_R p(a|R) p(R) (u(a,R) - u(a',R))``."""
    P = policy.rows([r.key for r in regions])
    U = region_utilities(instance, regions)
    W = P * np.array([r.mass for r in regions])[:, None]
    # sum_R W[R,a] U[R,a] - sum_R W[R,a] U[R,a']
    own = np.einsum("ra,ra->a", W, U)
    cross = W.T @ U
    return own[:, None] - cross


def verify_bic(instance: Instance, regions, policy: SignalingPolicy) -> float:
    """Smallest incentive slack over recommended actions ``a`` and deviations ``a' != a``.

    The policy is BIC iff the result is at least ``-BIC_TOL``.
    """
    M = incentive_matrix(instance, regions, policy)
    P = policy.rows([r.key for r in regions])
    marginal = np.array([r.mass for r in regions]) @ P
    n_a = instance.n_actions
    mask = (marginal > 0)[:, None] & ~np.eye(n_a, dtype=bool)
    return float(M[mask].min()) if mask.any() else 0.0


def expected_dm_utility(instance: Instance, regions, policy: SignalingPolicy) -> float:
    P = policy.rows([r.key for r in regions])
    mass = np.array([r.mass for r in regions])
    return float(mass @ P @ instance.dm_utilities)
