"""Published reference data: the HELOC credit model and the cost-elicitation tables."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Instance, InvalidInputError
from .costs import PairwiseComparisons

# Logistic-regression coefficients on the four HELOC features, then the bias.
HELOC_THETA = np.array([-0.22974527, 0.15633134, 0.52023116, -0.61600619, -0.08242841])

HELOC_FEATURES = (
    ("high_utilization_payments", "decrease"),
    ("satisfactory_payments", "increase"),
    ("pct_never_delinquent", "increase"),
    ("revolving_balance_ratio", "decrease"),
)


@dataclass(frozen=True)
class InstanceTemplate:
    """An action menu whose per-action cost and step size are filled in later.

    Action ``i`` moves only along ``directions[i]``; its feature change is
    ``delta_i * directions[i]``.
    """

    labels: tuple[str, ...]
    directions: tuple[tuple[float, ...], ...]
    dm_utilities: tuple[float, ...]
    x0: tuple[float, ...]

    def __post_init__(self):
        m = len(self.labels)
        if not (len(self.directions) == len(self.dm_utilities) == m):
            raise InvalidInputError("template needs one direction and utility per action")
        if any(len(d) != len(self.x0) for d in self.directions):
            raise InvalidInputError("template directions must match the feature count")

    @property
    def dim(self) -> int:
        return len(self.x0)

    @property
    def n_actions(self) -> int:
        return len(self.labels)

    def instantiate(self, costs, deltas, x0=None) -> Instance:
        costs = np.broadcast_to(np.asarray(costs, dtype=float), (self.n_actions,))
        deltas = np.broadcast_to(np.asarray(deltas, dtype=float), (self.n_actions,))
        specs = [
            {"label": lab, "delta_x": d * np.asarray(direc), "cost": c, "dm_utility": u}
            for lab, direc, u, c, d in zip(self.labels, self.directions, self.dm_utilities, costs, deltas)
        ]
        return Instance.build(self.x0 if x0 is None else x0, specs)


def heloc_fixture(dm_utilities=(1.0, 1.0, 1.0, 1.0)):
    """Four-feature HELOC template (one action per feature) and the trained rule.

    Decreasing actions point down their feature axis, so with the trained
    coefficients every action raises the applicant's score.  The default
    subject sits at the standardized feature mean.
    """
    dirs = []
    for i, (_, sense) in enumerate(HELOC_FEATURES):
        d = [0.0] * 4
        d[i] = -1.0 if sense == "decrease" else 1.0
        dirs.append(tuple(d))
    template = InstanceTemplate(
        labels=tuple(f"{'dec' if s == 'decrease' else 'inc'}_{name}" for name, s in HELOC_FEATURES),
        directions=tuple(dirs),
        dm_utilities=tuple(float(u) for u in dm_utilities),
        x0=(0.0, 0.0, 0.0, 0.0),
    )
    return template, HELOC_THETA.copy()


# (i, j, "i harder" count, "j harder" count), 0-based feature indices.
_COST_TABLES = {
    "i": [(0, 1, 8, 2), (0, 2, 9, 1), (0, 3, 7, 3), (1, 2, 2, 8), (1, 3, 0, 10), (2, 3, 1, 9)],
    "ii": [(0, 1, 2, 8), (0, 2, 3, 7), (0, 3, 4, 6), (1, 2, 6, 4), (1, 3, 7, 3), (2, 3, 6, 4)],
    "iii": [(0, 1, 2, 8), (0, 2, 1, 9), (0, 3, 4, 6), (1, 2, 3, 7), (1, 3, 7, 3), (2, 3, 7, 3)],
    "iv": [(0, 1, 8, 2), (0, 2, 9, 1), (0, 3, 2, 3), (1, 2, 7, 8), (1, 3, 0, 10), (2, 3, 1, 9)],
}

_PUBLISHED_COSTS = {
    "i": (0.5151, 0.0282, 0.0723, 0.3844),
    "ii": (0.1159, 0.428, 0.2758, 0.1803),
    "iii": (0.07640764, 0.27692769, 0.50635064, 0.14031403),
    "iv": (0.2987, 0.0428, 0.0476, 0.6109),
}

# Published cost orderings, most to least costly (0-based action indices).
PUBLISHED_ORDERINGS = {
    "i": (0, 3, 2, 1),
    "ii": (1, 2, 3, 0),
    "iii": (2, 1, 3, 0),
    "iv": (3, 0, 2, 1),
}


def cost_tables_fixture() -> dict[str, tuple[PairwiseComparisons, np.ndarray]]:
    labels = tuple(f"x{i + 1}" for i in range(4))
    return {
        name: (PairwiseComparisons.from_pairs(4, pairs, labels), np.array(_PUBLISHED_COSTS[name]))
        for name, pairs in _COST_TABLES.items()
    }
