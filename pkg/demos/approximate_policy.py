"""Sampling-based approximation: the relaxed program on K draws from the prior."""
import numpy as np

from recourse_signaling import DiscretePrior, Instance, approximate_policy, sample_count, solve_optimal_policy
from recourse_signaling import verify_eps_bic

inst = Instance.build([0.0], [([1.0], 0.5, 0.5), ([2.0], 1.2, 1.0)])
prior = DiscretePrior(np.array([[1.0, -1.5], [1.0, -0.5], [1.0, 0.5]]), np.array([0.3, 0.3, 0.4]))
opt = solve_optimal_policy(inst, prior).dm_value
print("OPT = %.4f" % opt)

for eps in [0.4, 0.2, 0.1]:
    K = sample_count(eps, 0.1, inst.n_actions)
    vals, slacks = [], []
    for seed in range(20):
        rep = approximate_policy(inst, prior, prior.support[seed % 3], eps, 0.1, seed)
        vals.append(rep.lp_value)
        slacks.append(verify_eps_bic(inst, rep))
    vals = np.array(vals)
    print("eps=%.2f K=%5d  median |lp-OPT|=%.4f  worst slack=%.4f" % (eps, K, np.median(abs(vals - opt)), min(slacks)))

rep = approximate_policy(inst, prior, prior.support[1], 0.2, 0.1, 0)
print("recommendation for the middle rule:", np.round(rep.recommendation_dist, 3))
