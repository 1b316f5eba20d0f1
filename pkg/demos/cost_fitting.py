"""Fit action difficulty from pairwise "which is harder" votes."""
import numpy as np

from recourse_signaling import PairwiseComparisons, cost_tables_fixture, fit_bradley_terry

for name, (comps, published) in cost_tables_fixture().items():
    p = fit_bradley_terry(comps)
    print(name, np.round(p, 3), "published", published, "max diff %.4f" % np.max(abs(p - published)))

# a toy survey: item 0 is usually judged harder than 1, which beats 2
W = np.array([[0, 8, 9], [2, 0, 7], [1, 3, 0]])
p = fit_bradley_terry(PairwiseComparisons(W))
print("toy strengths", np.round(p, 3))
print("P(0 harder than 2) = %.3f" % (p[0] / (p[0] + p[2])))
