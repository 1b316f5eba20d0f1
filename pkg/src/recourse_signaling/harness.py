"""Config ingestion, Monte Carlo discretization and grid sweeps."""
from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .approx import approximate_policy, verify_eps_bic
from .core import DiscretePrior, GaussianPrior, Instance, InvalidInputError, SignalingPolicy
from .costs import PairwiseComparisons
from .exact import (
    full_information_value,
    honest_policy,
    prior_best_action,
    solve_optimal_policy,
    verify_bic,
)
from .fixtures import InstanceTemplate, heloc_fixture
from .regions import RegionKey, enumerate_regions

METHODS = ("signal", "full", "none", "approx")
CSV_HEADER = ("sigma2", "action_costs", "action_deltas", "method", "dm_value", "bic_slack", "runtime_ms", "seed", "status")
DOMINANCE_TOL = 1e-7


class DominanceViolation(RuntimeError):
    """Signaling came out worse than a disclosure baseline in some cell."""

    def __init__(self, message, rows):
        super().__init__(message)
        self.rows = rows


def mc_discretize(prior: GaussianPrior, n: int, seed: int) -> DiscretePrior:
    """``n`` seeded draws from ``prior``, each with weight ``1/n``."""
    if int(n) < 1:
        raise InvalidInputError("n must be at least 1")
    n = int(n)
    draws = prior.sample(np.random.default_rng(seed), n)
    return DiscretePrior(draws, np.full(n, 1.0 / n))


def normalize_dm_utilities(instance: Instance) -> Instance:
    """Affinely map decision-maker utilities into [0, 1] (constant utilities map to 0)."""
    u = instance.dm_utilities
    lo, hi = float(u.min()), float(u.max())
    if lo >= 0 and hi <= 1:
        return instance
    span = hi - lo
    return instance.with_dm_utilities((u - lo) / span if span > 0 else np.zeros_like(u))


# ---------------------------------------------------------------- config JSON


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInputError(f"{where}: missing '{key}'")
    return obj[key]


def instance_from_config(cfg: dict) -> Instance:
    """``{dim, x0, actions: [{label, delta_x, cost, dm_utility}]}``; the null action is implicit."""
    x0 = _require(cfg, "x0", "instance")
    actions = _require(cfg, "actions", "instance")
    if "dim" in cfg and int(cfg["dim"]) != len(x0):
        raise InvalidInputError(f"instance: dim={cfg['dim']} but x0 has {len(x0)} entries")
    specs = []
    for i, a in enumerate(actions, start=1):
        specs.append({
            "label": a.get("label", f"a{i}"),
            "delta_x": _require(a, "delta_x", f"action {i}"),
            "cost": _require(a, "cost", f"action {i}"),
            "dm_utility": _require(a, "dm_utility", f"action {i}"),
        })
    try:
        return Instance.build(x0, specs)
    except (TypeError, KeyError) as exc:
        raise InvalidInputError(f"instance: {exc}") from exc


def prior_from_config(cfg: dict):
    """``{type: discrete, support, probs}`` or ``{type: gaussian, mean, std | variance [, bias_std]}``."""
    kind = _require(cfg, "type", "prior")
    if kind == "discrete":
        support = _require(cfg, "support", "prior")
        probs = cfg.get("probs")
        return DiscretePrior.uniform(support) if probs is None else DiscretePrior(support, probs)
    if kind == "gaussian":
        mean = _require(cfg, "mean", "prior")
        if "std" in cfg:
            return GaussianPrior(mean, cfg["std"])
        return GaussianPrior.isotropic(mean, float(_require(cfg, "variance", "prior")), float(cfg.get("bias_std", 0.0)))
    raise InvalidInputError(f"prior: unknown type {kind!r}")


def exact_prior(prior, cfg: dict, seed: int) -> DiscretePrior:
    """The prior as the exact solver sees it: discrete priors pass through, Gaussians are sampled."""
    if isinstance(prior, DiscretePrior):
        return prior
    return mc_discretize(prior, int(cfg.get("mc_samples", 2000)), seed)


def comparisons_from_config(cfg: dict) -> PairwiseComparisons:
    """``{wins: n x n}`` or ``{n, pairs: [[i, j, i_harder, j_harder], ...]}``, optional ``labels``."""
    labels = tuple(cfg.get("labels", ()))
    if "wins" in cfg:
        return PairwiseComparisons(np.asarray(cfg["wins"]), labels)
    pairs = _require(cfg, "pairs", "comparisons")
    return PairwiseComparisons.from_pairs(int(_require(cfg, "n", "comparisons")), pairs, labels)


def policy_from_json(obj: dict) -> SignalingPolicy:
    """Region bitstring -> distribution, bare or under a ``policy`` key (solve-exact output)."""
    if isinstance(obj, dict) and isinstance(obj.get("policy"), dict):
        obj = obj["policy"]
    if not isinstance(obj, dict) or not obj:
        raise InvalidInputError("policy must be a non-empty mapping of region bitstrings to distributions")
    keys = tuple(RegionKey.from_bits(k) for k in obj)
    return SignalingPolicy(keys, np.array([obj[k] for k in obj], dtype=float))


# --------------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepConfig:
    """One experiment: a template, a prior family over variances, and a cost/delta grid.

    ``grid_mode`` ``per_action`` sweeps one action at a time over
    ``costs x deltas`` with the others held at ``base_cost``/``base_delta``;
    ``product`` gives every action the same ``(cost, delta)`` per cell.
    ``subjects`` is ``None`` for the template's own subject, else a roster of
    ``x0`` vectors whose per-subject values are summed.
    """

    template: InstanceTemplate
    prior_mean: np.ndarray
    sigma2: tuple[float, ...]
    costs: tuple[float, ...]
    deltas: tuple[float, ...]
    seed: int
    mc_samples: int = 2000
    methods: tuple[str, ...] = ("signal", "full", "none")
    grid_mode: str = "per_action"
    base_cost: float = 0.25
    base_delta: float = 0.5
    bias_std: float = 0.0
    epsilon: float | None = None
    delta: float | None = None
    subjects: np.ndarray | None = field(default=None)
    record_timing: bool = True

    def __post_init__(self):
        if not self.sigma2 or not self.costs or not self.deltas:
            raise InvalidInputError("sweep grids and variance list must be nonempty")
        if int(self.mc_samples) < 1:
            raise InvalidInputError("mc_samples must be at least 1")
        bad = set(self.methods) - set(METHODS)
        if bad or not self.methods:
            raise InvalidInputError(f"unknown methods {sorted(bad)}; choose from {METHODS}")
        if "approx" in self.methods and (self.epsilon is None or self.delta is None):
            raise InvalidInputError("approx needs epsilon and delta")
        if self.grid_mode not in ("per_action", "product"):
            raise InvalidInputError(f"unknown grid mode {self.grid_mode!r}")
        if len(self.prior_mean) != self.template.dim + 1:
            raise InvalidInputError("prior mean must have dim + 1 entries (bias last)")
        if self.subjects is not None and np.asarray(self.subjects).shape[1:] != (self.template.dim,):
            raise InvalidInputError("roster subjects must have dim features each")

    def cells(self) -> list[tuple[tuple[float, ...], tuple[float, ...]]]:
        m = self.template.n_actions
        grid = list(itertools.product(self.costs, self.deltas))
        if self.grid_mode == "product":
            return [((c,) * m, (d,) * m) for c, d in grid]
        out = []
        for i in range(m):
            for c, d in grid:
                cs = [self.base_cost] * m
                ds = [self.base_delta] * m
                cs[i], ds[i] = c, d
                out.append((tuple(cs), tuple(ds)))
        return out

    def roster(self) -> np.ndarray:
        if self.subjects is None:
            return np.asarray(self.template.x0, dtype=float)[None, :]
        return np.asarray(self.subjects, dtype=float)


def synthetic_roster(n: int, dim: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Seeded stand-in subjects: standardized features drawn i.i.d. from ``N(0, scale^2)``."""
    return scale * np.random.default_rng(seed).standard_normal((int(n), int(dim)))


def sweep_config_from_json(cfg: dict) -> SweepConfig:
    """Parse a sweep document; see the README for the schema."""
    inst = _require(cfg, "instance", "sweep")
    if inst == "heloc" or (isinstance(inst, dict) and inst.get("fixture") == "heloc"):
        template, theta = heloc_fixture()
        if isinstance(inst, dict) and "x0" in inst:
            template = InstanceTemplate(template.labels, template.directions, template.dm_utilities, tuple(inst["x0"]))
    else:
        x0 = tuple(float(v) for v in _require(inst, "x0", "instance"))
        acts = _require(inst, "actions", "instance")
        template = InstanceTemplate(
            labels=tuple(a.get("label", f"a{i + 1}") for i, a in enumerate(acts)),
            directions=tuple(tuple(float(v) for v in _require(a, "direction", "action")) for a in acts),
            dm_utilities=tuple(float(_require(a, "dm_utility", "action")) for a in acts),
            x0=x0,
        )
        theta = None
    prior = cfg.get("prior", {})
    mean = prior.get("mean", theta)
    if mean is None:
        raise InvalidInputError("prior: missing 'mean'")
    grid = _require(cfg, "grid", "sweep")
    subjects = None
    sub = cfg.get("subjects")
    if isinstance(sub, dict) and sub.get("mode") == "roster":
        if "x0" in sub:
            subjects = np.asarray(sub["x0"], dtype=float)
        else:
            subjects = synthetic_roster(int(sub.get("n", 20)), template.dim, int(_require(sub, "seed", "subjects")), float(sub.get("scale", 1.0)))
    approx = cfg.get("approx", {})
    return SweepConfig(
        template=template,
        prior_mean=np.asarray(mean, dtype=float),
        sigma2=tuple(float(v) for v in _require(prior, "sigma2", "prior")),
        costs=tuple(float(v) for v in _require(grid, "costs", "grid")),
        deltas=tuple(float(v) for v in _require(grid, "deltas", "grid")),
        seed=int(_require(cfg, "seed", "sweep")),
        mc_samples=int(cfg.get("mc_samples", 2000)),
        methods=tuple(cfg.get("methods", ("signal", "full", "none"))),
        grid_mode=grid.get("mode", "per_action"),
        base_cost=float(grid.get("base_cost", 0.25)),
        base_delta=float(grid.get("base_delta", 0.5)),
        bias_std=float(prior.get("bias_std", 0.0)),
        epsilon=approx.get("epsilon"),
        delta=approx.get("delta"),
        subjects=subjects,
        record_timing=bool(cfg.get("record_timing", True)),
    )


@dataclass(frozen=True)
class SweepRow:
    sigma2: float
    action_costs: tuple[float, ...]
    action_deltas: tuple[float, ...]
    method: str
    dm_value: float
    bic_slack: float
    runtime_ms: float
    seed: int
    status: str = "ok"
    # Per-subject values, for the dominance check.
    per_subject: tuple[float, ...] = ()

    def csv_fields(self) -> list[str]:
        return [
            repr(self.sigma2),
            ";".join(repr(c) for c in self.action_costs),
            ";".join(repr(d) for d in self.action_deltas),
            self.method,
            repr(self.dm_value),
            repr(self.bic_slack),
            f"{self.runtime_ms:.3f}",
            str(self.seed),
            self.status,
        ]


def _method_value(method, inst, disc, prior, theta_true, cfg):
    """``(dm_value, bic_slack, status)`` for one subject."""
    if method == "signal":
        rep = solve_optimal_policy(inst, disc)
        return rep.dm_value, rep.bic_slack, "ok"
    regions = [r for r in enumerate_regions(inst, disc) if r.mass > 0]
    if method == "full":
        return full_information_value(inst, disc), verify_bic(inst, regions, honest_policy(inst, regions)), "ok"
    if method == "none":
        a = prior_best_action(inst, regions)
        P = np.zeros((len(regions), inst.n_actions))
        P[:, a] = 1.0
        return float(inst.dm_utilities[a]), verify_bic(inst, regions, SignalingPolicy(tuple(r.key for r in regions), P)), "ok"
    rep = approximate_policy(normalize_dm_utilities(inst), prior, theta_true, cfg.epsilon, cfg.delta, cfg.seed)
    slack = verify_eps_bic(normalize_dm_utilities(inst), rep)
    return rep.lp_value, slack, f"ok eps={cfg.epsilon!r} delta={cfg.delta!r} K={rep.K}"


def _run_cell(args):
    cfg, sigma2, costs, deltas = args
    prior = GaussianPrior.isotropic(cfg.prior_mean, sigma2, cfg.bias_std)
    disc = mc_discretize(prior, cfg.mc_samples, cfg.seed)
    rows = []
    for method in cfg.methods:
        start = time.perf_counter()
        values, slacks, status = [], [], "ok"
        try:
            for x0 in cfg.roster():
                inst = cfg.template.instantiate(costs, deltas, x0)
                v, s, status = _method_value(method, inst, disc, prior, cfg.prior_mean, cfg)
                values.append(v)
                slacks.append(s)
            value, slack = float(sum(values)), float(min(slacks))
        except Exception as exc:  # recorded per row; the sweep keeps going
            value, slack, values = float("nan"), float("nan"), []
            status = f"error {type(exc).__name__}: {exc}".replace("\n", " ")
        elapsed = (time.perf_counter() - start) * 1000.0 if cfg.record_timing else 0.0
        rows.append(SweepRow(sigma2, costs, deltas, method, value, slack, elapsed, cfg.seed, status, tuple(values)))
    return rows


def check_dominance(rows) -> list[str]:
    """Cells (by row) where signaling loses to a baseline for some subject."""
    problems = []
    by_cell: dict = {}
    for r in rows:
        by_cell.setdefault((r.sigma2, r.action_costs, r.action_deltas), {})[r.method] = r
    for cell, methods in by_cell.items():
        sig = methods.get("signal")
        if sig is None or not sig.status.startswith("ok"):
            continue
        for base in ("full", "none"):
            other = methods.get(base)
            if other is None or not other.status.startswith("ok"):
                continue
            gaps = np.subtract(sig.per_subject, other.per_subject)
            if gaps.size and gaps.min() < -DOMINANCE_TOL:
                problems.append(f"sigma2={cell[0]} costs={cell[1]} deltas={cell[2]}: signal < {base} by {-gaps.min():.3g}")
    return problems


def run_sweep(config: SweepConfig, workers: int = 1) -> list[SweepRow]:
    """Rows ordered by variance, then cell, then method, whatever the worker count.

    Raises ``DominanceViolation`` (carrying the rows) if any cell breaks the
    signal-beats-baselines guarantee.
    """
    jobs = [(config, s2, c, d) for s2 in config.sigma2 for c, d in config.cells()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, jobs))
    else:
        chunks = [_run_cell(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    problems = check_dominance(rows)
    if problems:
        raise DominanceViolation("; ".join(problems), rows)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def mean_gap_by_variance(rows) -> dict[float, float]:
    """Average of ``signal - max(full, none)`` over cells, per variance."""
    by_cell: dict = {}
    for r in rows:
        by_cell.setdefault((r.sigma2, r.action_costs, r.action_deltas), {})[r.method] = r.dm_value
    gaps: dict = {}
    for (s2, _, _), v in by_cell.items():
        gaps.setdefault(s2, []).append(v["signal"] - max(v["full"], v["none"]))
    return {s2: float(np.mean(g)) for s2, g in gaps.items()}
