"""Dense two-phase primal simplex with Bland's anti-cycling rule.

Problems are stated as::

    maximize    c @ x
    subject to  G @ x >= h
                A @ x == b
                x >= 0

Tolerances are fixed so results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import InvalidInputError, SolverStallError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
NONNEG_TOL = 1e-9
# Pivot budget is CAP_FACTOR * (rows + cols)^2.
CAP_FACTOR = 10


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LpProblem:
    objective: np.ndarray
    G: np.ndarray
    h: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __init__(self, objective, G=None, h=None, A=None, b=None):
        c = np.asarray(objective, dtype=float).reshape(-1)
        n = c.shape[0]
        G, h = _block(G, h, n, "inequality")
        A, b = _block(A, b, n, "equality")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]


def _block(M, v, n, what):
    if M is None:
        if v is not None and len(v):
            raise InvalidInputError(f"{what} right-hand side given without a matrix")
        return np.zeros((0, n)), np.zeros(0)
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        M = M.reshape(0, n)
    v = np.asarray(v, dtype=float).reshape(-1)
    if M.ndim != 2 or M.shape[1] != n:
        raise InvalidInputError(f"{what} matrix must have {n} columns, got shape {M.shape}")
    if v.shape[0] != M.shape[0]:
        raise InvalidInputError(f"{what} right-hand side has length {v.shape[0]}, expected {M.shape[0]}")
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(v))):
        raise InvalidInputError(f"{what} data contains non-finite entries")
    return M, v


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: Status
    x: np.ndarray
    value: float
    iterations: int = 0


class _Tableau:
    """Rows 0..k-1 are constraints, row k is reduced costs; last column is the rhs."""

    def __init__(self, T, basis, cap):
        self.T = T
        self.basis = basis
        self.cap = cap
        self.iterations = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def run(self, allowed: int) -> bool:
        """Iterate to optimality over columns ``< allowed``; False if unbounded."""
        T = self.T
        k = T.shape[0] - 1
        while True:
            d = T[k, :allowed]
            candidates = np.flatnonzero(d > PIVOT_TOL)
            if candidates.size == 0:
                return True
            j = int(candidates[0])
            col = T[:k, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return False
            ratios = T[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(tied[np.argmin(np.asarray(self.basis)[tied])])
            self.iterations += 1
            if self.iterations > self.cap:
                raise SolverStallError(f"simplex exceeded {self.cap} pivots")
            self.pivot(r, j)


def solve(problem: LpProblem) -> LpSolution:
    c = problem.objective
    n = problem.n_vars
    p = problem.G.shape[0]
    # Standard form: [G -I; A 0] [x; s] = [h; b], everything >= 0.
    M = np.zeros((p + problem.A.shape[0], n + p))
    M[:p, :n] = problem.G
    M[:p, n:] = -np.eye(p)
    M[p:, :n] = problem.A
    r = np.concatenate([problem.h, problem.b])
    flip = r < 0
    M[flip] *= -1
    r = np.where(flip, -r, r)
    k, nz = M.shape
    cap = CAP_FACTOR * (k + nz) ** 2

    if k == 0:
        if np.any(c > PIVOT_TOL):
            return LpSolution(Status.UNBOUNDED, np.zeros(n), float("inf"))
        return LpSolution(Status.OPTIMAL, np.zeros(n), 0.0)

    # Phase 1: one artificial per row, maximize -sum(artificials).
    T = np.zeros((k + 1, nz + k + 1))
    T[:k, :nz] = M
    T[:k, nz:nz + k] = np.eye(k)
    T[:k, -1] = r
    T[k, :nz] = M.sum(axis=0)
    T[k, -1] = r.sum()
    tab = _Tableau(T, list(range(nz, nz + k)), cap)
    tab.run(nz + k)

    art_level = sum(T[i, -1] for i in range(k) if tab.basis[i] >= nz)
    if art_level > FEAS_TOL:
        return LpSolution(Status.INFEASIBLE, np.zeros(n), float("nan"), tab.iterations)

    # Drive zero-level artificials out; rows where that is impossible are redundant.
    keep = []
    for i in range(k):
        if tab.basis[i] >= nz:
            nonzero = np.flatnonzero(np.abs(T[i, :nz]) > PIVOT_TOL)
            if nonzero.size:
                tab.pivot(i, int(nonzero[0]))
                keep.append(i)
        else:
            keep.append(i)
    rows = keep + [k]
    T2 = np.hstack([T[np.ix_(rows, range(nz))], T[rows, -1:]])
    basis = [tab.basis[i] for i in keep]
    k2 = len(keep)

    # Phase 2 reduced costs for the true objective.
    cz = np.concatenate([c, np.zeros(p)])
    cb = cz[basis]
    T2[k2, :nz] = cz - cb @ T2[:k2, :nz]
    T2[k2, -1] = -cb @ T2[:k2, -1]
    tab2 = _Tableau(T2, basis, cap)
    tab2.iterations = tab.iterations
    if not tab2.run(nz):
        return LpSolution(Status.UNBOUNDED, np.zeros(n), float("inf"), tab2.iterations)

    z = _refine(M, r, T2, basis, k2, nz)
    x = z[:n]
    x = np.where((x < 0) & (x > -NONNEG_TOL), 0.0, x)
    _certify(problem, x)
    return LpSolution(Status.OPTIMAL, x, float(c @ x), tab2.iterations)


def _refine(M, r, T, basis, k2, nz):
    """Recompute basic values from the original data to shed tableau round-off."""
    z = np.zeros(nz)
    tableau_vals = T[:k2, -1]
    B = M[:, basis]
    try:
        sol, *_ = np.linalg.lstsq(B, r, rcond=None)
    except np.linalg.LinAlgError:
        sol = tableau_vals
    if not np.all(np.isfinite(sol)) or np.max(np.abs(B @ sol - r), initial=0.0) > np.max(
        np.abs(B @ tableau_vals - r), initial=0.0
    ):
        sol = tableau_vals
    z[basis] = sol
    z[np.abs(z) < 1e-15] = 0.0
    return z


def _certify(problem: LpProblem, x):
    if np.any(x < -NONNEG_TOL):
        raise SolverStallError("simplex returned a point violating x >= 0")
    if problem.G.shape[0] and np.any(problem.G @ x < problem.h - FEAS_TOL):
        raise SolverStallError("simplex returned a point violating an inequality")
    if problem.A.shape[0] and np.any(np.abs(problem.A @ x - problem.b) > FEAS_TOL):
        raise SolverStallError("simplex returned a point violating an equality")
