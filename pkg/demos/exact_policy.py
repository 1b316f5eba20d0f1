"""Solve for the optimal recommendation policy on a tiny two-action instance."""
import numpy as np

from recourse_signaling import (
    DiscretePrior,
    Instance,
    full_information_value,
    no_information_value,
    solve_optimal_policy,
    verify_bic,
)

# one feature at 0; a small step (cost 0.5) and a big step (cost 1.2)
inst = Instance.build([0.0], [([1.0], 0.5, 0.5), ([2.0], 1.2, 1.0)])
support = np.array([[1.0, -1.5], [1.0, -0.5], [1.0, 0.5]])
prior = DiscretePrior(support, np.array([0.3, 0.3, 0.4]))

rep = solve_optimal_policy(inst, prior)
print("regions:", [r.key.bits for r in rep.regions])
print("masses: ", rep.region_masses)
print("policy (rows = regions, cols = null, small, big):")
print(np.round(rep.policy.probs, 4))
print("value %.6f  (13/14 = %.6f)" % (rep.dm_value, 13 / 14))
print("BIC slack", rep.bic_slack, "re-verified", verify_bic(inst, rep.regions, rep.policy))
print("full information", full_information_value(inst, prior))
print("no information  ", no_information_value(inst, prior))
