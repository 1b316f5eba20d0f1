"""Command-line entry point: ``recourse-signaling <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .approx import approximate_policy, verify_eps_bic
from .core import InvalidInputError, PreconditionError, SolverStallError
from .costs import IterationLimitError, UnidentifiableModelError, fit_bradley_terry
from .exact import BIC_TOL, expected_dm_utility, full_information_value, no_information_value, solve_optimal_policy, verify_bic
from .harness import (
    DominanceViolation,
    comparisons_from_config,
    exact_prior,
    instance_from_config,
    policy_from_json,
    prior_from_config,
    rows_to_csv,
    run_sweep,
    sweep_config_from_json,
)
from .oned import OneDExample, discretize, payoff_row, region_probs
from .regions import enumerate_regions

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_VIOLATION = 4


def _load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"{path}: {exc}") from exc


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _seed(cfg):
    if "seed" not in cfg:
        raise InvalidInputError("config: 'seed' is required")
    return int(cfg["seed"])


def _problem(cfg):
    inst = instance_from_config(cfg.get("instance"))
    prior = prior_from_config(cfg.get("prior"))
    return inst, prior


def cmd_solve_exact(args):
    cfg = _load(args.config)
    inst, prior = _problem(cfg)
    disc = exact_prior(prior, cfg, _seed(cfg))
    rep = solve_optimal_policy(inst, disc)
    _, none_value = no_information_value(inst, disc)
    _emit({
        "policy": rep.policy.to_dict(),
        "region_masses": {str(r.key): r.mass for r in rep.regions},
        "dm_value": rep.dm_value,
        "bic_slack": rep.bic_slack,
        "full_information_value": full_information_value(inst, disc),
        "no_information_value": none_value,
    }, args.out)
    return EXIT_OK


def cmd_solve_approx(args):
    cfg = _load(args.config)
    inst, prior = _problem(cfg)
    if "theta_true" not in cfg:
        raise InvalidInputError("config: 'theta_true' is required for solve-approx")
    seed = _seed(cfg) if args.seed is None else args.seed
    rep = approximate_policy(inst, prior, cfg["theta_true"], args.epsilon, args.delta, seed)
    _emit({
        "recommendation": rep.recommendation_dist.tolist(),
        "true_region": str(rep.true_region.key),
        "policy": rep.policy.to_dict(),
        "lp_value": rep.lp_value,
        "eps_bic_slack": verify_eps_bic(inst, rep),
        "epsilon": rep.epsilon,
        "delta": rep.delta,
        "K": rep.K,
        "seed": rep.seed,
    }, args.out)
    return EXIT_OK


def cmd_oned(args):
    ex = OneDExample(args.x0, args.delta, args.cost, args.mean, args.std)
    probs = region_probs(ex)
    none, signal, full = payoff_row(probs.pM, ex.cost)
    inst, disc = discretize(ex)
    rep = solve_optimal_policy(inst, disc)
    _emit({
        "pL": probs.pL, "pM": probs.pM, "pH": probs.pH,
        "none": none, "signaling": signal, "full": full,
        "lp_signaling": rep.dm_value,
    }, args.out)
    return EXIT_OK


def cmd_fit_costs(args):
    cfg = _load(args.counts)
    comps = comparisons_from_config(cfg)
    p = fit_bradley_terry(comps, tol=args.tol, max_iter=args.max_iter)
    _emit({"labels": list(comps.labels), "costs": p.tolist()}, args.out)
    return EXIT_OK


def cmd_sweep(args):
    cfg = sweep_config_from_json(_load(args.sweep))
    code = EXIT_OK
    try:
        rows = run_sweep(cfg, workers=args.workers)
    except DominanceViolation as exc:
        rows = exc.rows
        print(f"dominance check failed: {exc}", file=sys.stderr)
        code = EXIT_VIOLATION
    Path(args.out).write_text(rows_to_csv(rows))
    if code == EXIT_OK and any(not r.status.startswith("ok") for r in rows):
        code = EXIT_SOLVER
    return code


def cmd_verify(args):
    policy = policy_from_json(_load(args.policy))
    cfg = _load(args.config)
    inst, prior = _problem(cfg)
    disc = exact_prior(prior, cfg, _seed(cfg))
    regions = [r for r in enumerate_regions(inst, disc) if r.mass > 0]
    missing = [str(r.key) for r in regions if r.key not in policy]
    if missing:
        raise InvalidInputError(f"policy has no row for regions {missing}")
    slack = verify_bic(inst, regions, policy)
    ok = slack >= -BIC_TOL
    _emit({"bic": ok, "bic_slack": slack, "dm_value": expected_dm_utility(inst, regions, policy)})
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recourse-signaling", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-exact", help="optimal BIC policy for a discrete (or sampled Gaussian) prior")
    s.add_argument("config")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve_exact)

    s = sub.add_parser("solve-approx", help="sampled epsilon-BIC recommendation for theta_true")
    s.add_argument("config")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve_approx)

    s = sub.add_parser("oned", help="closed-form one-feature example")
    s.add_argument("--x0", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--cost", type=float, required=True)
    s.add_argument("--mean", type=float, required=True, help="prior mean of the threshold")
    s.add_argument("--std", type=float, required=True, help="prior std of the threshold")
    s.add_argument("--out")
    s.set_defaults(func=cmd_oned)

    s = sub.add_parser("fit-costs", help="Bradley-Terry costs from pairwise counts")
    s.add_argument("counts")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=10000)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fit_costs)

    s = sub.add_parser("sweep", help="grid experiment to CSV")
    s.add_argument("sweep")
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify", help="check a policy JSON for BIC against a config")
    s.add_argument("policy")
    s.add_argument("config")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, PreconditionError, UnidentifiableModelError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SolverStallError, IterationLimitError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
