"""Optimal and approximately optimal incentive-compatible recommendation policies for recourse."""
from .approx import ApproxReport, approximate_policy, large_or_honest_policy, sample_count, verify_eps_bic
from .core import (
    Action,
    DiscretePrior,
    GaussianPrior,
    Instance,
    InvalidInputError,
    PreconditionError,
    SignalingPolicy,
    SolverStallError,
    classify,
    subject_utility,
)
from .costs import IterationLimitError, PairwiseComparisons, UnidentifiableModelError, fit_bradley_terry
from .exact import (
    SolveReport,
    build_opt_lp,
    expected_dm_utility,
    full_information_value,
    honest_policy,
    no_information_value,
    solve_optimal_policy,
    verify_bic,
)
from .fixtures import InstanceTemplate, cost_tables_fixture, heloc_fixture
from .harness import DominanceViolation, SweepConfig, SweepRow, mc_discretize, run_sweep
from .lp import LpProblem, LpSolution, Status, solve
from .oned import OneDExample, bic_q, discretize, payoff_row, region_probs, unbounded_instance
from .regions import (
    Region,
    RegionKey,
    empirical_region_count,
    enumerate_regions,
    is_dominated,
    region_key,
    theoretical_region_count,
)

__version__ = "0.1.0"
