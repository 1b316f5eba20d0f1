"""One feature, one action: how much a recommender gains over full disclosure.

A bank scores a single feature (think credit score) against an unknown
threshold.  Raising the feature by ``delta`` costs the applicant ``cost``.
"""
import numpy as np

from recourse_signaling import OneDExample, bic_q, discretize, payoff_row, region_probs, solve_optimal_policy
from recourse_signaling import unbounded_instance

ex = OneDExample(x0=660.0, delta=40.0, cost=1.0, prior_mean=-650.0, prior_std=50.0)
p = region_probs(ex)
print("band masses  L=%.4f  M=%.4f  H=%.4f" % (p.pL, p.pM, p.pH))

none, signal, full = payoff_row(p.pM, ex.cost)
print("no information   ", none)
print("full information ", round(full, 6))
print("signaling        ", round(signal, 6), " q =", round(bic_q(p.pM, ex.cost), 6))

# the same number from the general linear program
inst, prior = discretize(ex)
rep = solve_optimal_policy(inst, prior)
print("LP value         ", round(rep.dm_value, 6))

# the gap between signaling and full disclosure is unbounded
print("\neps    full     signal   ratio")
for eps in [0.2, 0.1, 0.05, 0.01]:
    g = unbounded_instance(eps)
    _, s, f = payoff_row(g.pM, g.cost)
    print("%-6g %-8.4f %-8.4f %.1f" % (eps, f, s, s / f))

# sweep the cost and watch the recommendation probability shrink
for c in np.linspace(0.1, 1.9, 7):
    print("cost %.2f  q=%.3f" % (c, bic_q(p.pM, c)))
