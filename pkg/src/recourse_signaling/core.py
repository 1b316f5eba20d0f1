"""Domain types and the elementary utility computations shared by every solver.

Feature vectors given by the user are ``d``-dimensional.  Assessment rules
``theta`` carry one extra trailing bias coordinate, so a subject with raw
features ``x0`` is scored as ``[x0, 1] @ theta``.  A score of exactly zero
counts as a positive classification.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PROB_TOL = 1e-12
ROW_TOL = 1e-9


class InvalidInputError(ValueError):
    """Malformed instance, prior, policy or configuration."""


class SolverStallError(RuntimeError):
    """The simplex iteration cap was hit before a certified answer."""


class PreconditionError(ValueError):
    """An algorithm was called outside the regime it is defined for."""


def _vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Action:
    id: int
    label: str
    delta_x: np.ndarray
    cost: float
    dm_utility: float

    def __post_init__(self):
        object.__setattr__(self, "delta_x", _vector(self.delta_x, "delta_x"))
        object.__setattr__(self, "cost", float(self.cost))
        object.__setattr__(self, "dm_utility", float(self.dm_utility))
        if self.cost < 0:
            raise InvalidInputError(f"action {self.label!r} has negative cost {self.cost}")

    @property
    def is_null(self) -> bool:
        return bool(not np.any(self.delta_x) and self.cost == 0.0 and self.dm_utility == 0.0)


@dataclass(frozen=True, eq=False)
class Instance:
    """One decision subject facing a menu of actions.

    ``actions[0]`` must be the null action (no feature change, zero cost,
    zero decision-maker utility).  Use :meth:`build` to have it prepended.
    """

    dim: int
    actions: tuple[Action, ...]
    x0: np.ndarray

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InvalidInputError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "x0", _vector(self.x0, "x0"))
        object.__setattr__(self, "actions", tuple(self.actions))
        if self.x0.shape[0] != self.dim:
            raise InvalidInputError(f"x0 has length {self.x0.shape[0]}, expected {self.dim}")
        if not self.actions:
            raise InvalidInputError("an instance needs at least the null action")
        if not self.actions[0].is_null:
            raise InvalidInputError("actions[0] must be the null action (zero delta, cost and utility)")
        for i, a in enumerate(self.actions):
            if a.delta_x.shape[0] != self.dim:
                raise InvalidInputError(f"action {a.label!r}: delta_x has length {a.delta_x.shape[0]}, expected {self.dim}")
            if a.id != i:
                raise InvalidInputError(f"action {a.label!r} has id {a.id} at position {i}")
        # Augmented post-action feature matrix, one row per action: [x0 + dx, 1].
        feats = np.hstack([self.x0[None, :] + np.stack([a.delta_x for a in self.actions]),
                           np.ones((len(self.actions), 1))])
        feats.setflags(write=False)
        object.__setattr__(self, "_features", feats)
        costs = np.array([a.cost for a in self.actions])
        costs.setflags(write=False)
        object.__setattr__(self, "_costs", costs)
        dm = np.array([a.dm_utility for a in self.actions])
        dm.setflags(write=False)
        object.__setattr__(self, "_dm", dm)

    @classmethod
    def build(cls, x0: Sequence[float], actions: Sequence[dict | tuple], null_label: str = "none") -> "Instance":
        """Create an instance from non-null action specs; the null action is added as id 0.

        Each spec is a mapping with ``delta_x``, ``cost``, ``dm_utility`` and
        optionally ``label``, or a ``(delta_x, cost, dm_utility)`` tuple.
        """
        x0 = _vector(x0, "x0")
        dim = x0.shape[0]
        acts = [Action(0, null_label, np.zeros(dim), 0.0, 0.0)]
        for i, spec in enumerate(actions, start=1):
            if isinstance(spec, dict):
                acts.append(Action(i, spec.get("label", f"a{i}"), spec["delta_x"], spec["cost"], spec["dm_utility"]))
            else:
                dx, cost, u = spec
                acts.append(Action(i, f"a{i}", dx, cost, u))
        return cls(dim, tuple(acts), x0)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def features(self) -> np.ndarray:
        """``(m+1, d+1)`` matrix of augmented post-action feature vectors."""
        return self._features

    @property
    def costs(self) -> np.ndarray:
        return self._costs

    @property
    def dm_utilities(self) -> np.ndarray:
        return self._dm

    def with_dm_utilities(self, values: Sequence[float]) -> "Instance":
        values = list(values)
        if len(values) != self.n_actions:
            raise InvalidInputError("need one utility per action")
        acts = [Action(a.id, a.label, a.delta_x, a.cost, u) for a, u in zip(self.actions, values)]
        return Instance(self.dim, tuple(acts), self.x0)

    def outcomes(self, thetas) -> np.ndarray:
        """Boolean positive-classification matrix, shape ``(n, m+1)``, for a batch of rules."""
        thetas = np.asarray(thetas, dtype=float)
        single = thetas.ndim == 1
        thetas = np.atleast_2d(thetas)
        if thetas.shape[1] != self.dim + 1:
            raise InvalidInputError(f"theta has length {thetas.shape[1]}, expected {self.dim + 1}")
        out = thetas @ self._features.T >= 0.0
        return out[0] if single else out

    def _check_action(self, action_id: int) -> int:
        if not 0 <= int(action_id) < self.n_actions:
            raise InvalidInputError(f"unknown action id {action_id}")
        return int(action_id)


def classify(instance: Instance, theta, action_id: int) -> int:
    """Classification (+1 or -1) the subject receives after taking ``action_id`` under ``theta``."""
    a = instance._check_action(action_id)
    return 1 if instance.outcomes(_vector(theta, "theta"))[a] else -1


def subject_utility(instance: Instance, action_id: int, positive: bool) -> float:
    """Subject's payoff for ``action_id`` given its classification outcome."""
    a = instance._check_action(action_id)
    return (1.0 if positive else -1.0) - instance.costs[a]


def subject_utilities(instance: Instance, outcomes) -> np.ndarray:
    """Vectorized :func:`subject_utility` over a boolean outcome array (last axis = actions)."""
    outcomes = np.asarray(outcomes, dtype=bool)
    return np.where(outcomes, 1.0, -1.0) - instance.costs


@dataclass(frozen=True, eq=False)
class DiscretePrior:
    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.atleast_2d(np.asarray(self.support, dtype=float)).copy()
        probs = _vector(self.probs, "probs")
        if support.shape[0] != probs.shape[0] or probs.shape[0] < 1:
            raise InvalidInputError("support and probs must have equal, nonzero length")
        if np.any(probs < 0):
            raise InvalidInputError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise InvalidInputError(f"probabilities sum to {probs.sum()!r}, not 1")
        support.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, support) -> "DiscretePrior":
        support = np.atleast_2d(np.asarray(support, dtype=float))
        n = support.shape[0]
        return cls(support, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, theta) -> "DiscretePrior":
        return cls(np.atleast_2d(theta), [1.0])

    @property
    def dim(self) -> int:
        return self.support.shape[1]

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        idx = rng.choice(self.probs.shape[0], size=n, p=self.probs)
        return self.support[idx]


@dataclass(frozen=True, eq=False)
class GaussianPrior:
    """Independent Gaussian coordinates; a zero std pins that coordinate to its mean."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = _vector(self.mean, "mean")
        std = _vector(self.std, "std")
        if mean.shape != std.shape:
            raise InvalidInputError("mean and std must have equal length")
        if np.any(std < 0):
            raise InvalidInputError("std entries must be nonnegative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    @classmethod
    def isotropic(cls, mean, variance: float, bias_std: float = 0.0) -> "GaussianPrior":
        """``N(mean, variance * I)`` on the coefficients, bias coordinate with its own std."""
        mean = np.asarray(mean, dtype=float)
        std = np.full(mean.shape[0], np.sqrt(variance))
        std[-1] = bias_std
        return cls(mean, std)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.mean + rng.standard_normal((n, self.dim)) * self.std


def draw(sampler, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` rules from a prior object or a ``(rng, n) -> array`` callable."""
    fn = sampler.sample if hasattr(sampler, "sample") else sampler
    out = np.atleast_2d(np.asarray(fn(rng, n), dtype=float))
    if out.shape[0] != n:
        raise InvalidInputError(f"sampler returned {out.shape[0]} rows, expected {n}")
    return out


@dataclass(frozen=True, eq=False)
class SignalingPolicy:
    """Per-region distribution over recommended actions.

    Rows follow ``regions``; columns follow action ids.
    """

    regions: tuple
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        regions = tuple(self.regions)
        probs = np.atleast_2d(np.asarray(self.probs, dtype=float))
        if probs.shape[0] != len(regions):
            raise InvalidInputError("one probability row per region is required")
        if np.any(probs < -ROW_TOL):
            raise InvalidInputError("policy has negative probabilities")
        if np.any(np.abs(probs.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidInputError("policy rows must sum to 1")
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        object.__setattr__(self, "regions", regions)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(regions)})

    def __contains__(self, key) -> bool:
        return key in self._index

    def row(self, key) -> np.ndarray:
        try:
            return self.probs[self._index[key]]
        except KeyError:
            raise InvalidInputError(f"policy has no row for region {key}") from None

    def rows(self, keys) -> np.ndarray:
        return np.stack([self.row(k) for k in keys]) if keys else np.zeros((0, self.probs.shape[1]))

    def to_dict(self) -> dict[str, list[float]]:
        return {str(k): [float(p) for p in row] for k, row in zip(self.regions, self.probs)}
