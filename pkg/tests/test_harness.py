import dataclasses

import numpy as np
import pytest

from recourse_signaling import GaussianPrior, InvalidInputError, enumerate_regions, heloc_fixture
from recourse_signaling.harness import (
    CSV_HEADER,
    DominanceViolation,
    SweepConfig,
    SweepRow,
    check_dominance,
    mc_discretize,
    normalize_dm_utilities,
    rows_to_csv,
    run_sweep,
    sweep_config_from_json,
    synthetic_roster,
)


def test_mc_discretize_basics():
    g = GaussianPrior([1.0, -2.0], [0.5, 0.0])
    one = mc_discretize(g, 1, 0)
    assert one.support.shape == (1, 2) and one.probs[0] == 1.0
    d1, d2 = mc_discretize(g, 50, 7), mc_discretize(g, 50, 7)
    assert np.array_equal(d1.support, d2.support)
    with pytest.raises(InvalidInputError):
        mc_discretize(g, 0, 0)


def test_mc_discretize_zero_std_single_region():
    tmpl, theta = heloc_fixture()
    disc = mc_discretize(GaussianPrior(theta, np.zeros(5)), 30, 1)
    assert np.all(disc.support == theta)
    assert len(enumerate_regions(tmpl.instantiate(0.25, 0.5), disc)) == 1


def test_mc_discretize_mean_within_clt_bound():
    mean = np.array([0.3, -1.0, 2.0])
    std = np.array([1.0, 0.5, 2.0])
    disc = mc_discretize(GaussianPrior(mean, std), 10_000, 123)
    assert np.all(np.abs(disc.support.mean(axis=0) - mean) <= 4 * std / np.sqrt(10_000))


def test_heloc_fixture():
    tmpl, theta = heloc_fixture()
    assert theta.shape == (5,)
    np.testing.assert_array_equal(theta, [-0.22974527, 0.15633134, 0.52023116, -0.61600619, -0.08242841])
    # feature 3 has a positive weight and its action increases it
    assert theta[2] > 0 and tmpl.directions[2][2] > 0
    # every action moves its own feature in the direction that raises the score
    for i, d in enumerate(tmpl.directions):
        assert d[i] * theta[i] > 0
    assert max(tmpl.dm_utilities) == 1.0


def small_config(**kw):
    tmpl, theta = heloc_fixture()
    base = dict(template=tmpl, prior_mean=theta, sigma2=(0.4,), costs=(0.25,), deltas=(0.5,), seed=3, mc_samples=300)
    base.update(kw)
    return SweepConfig(**base)


def test_single_cell_rows():
    rows = run_sweep(small_config(grid_mode="product"))
    assert [r.method for r in rows] == ["signal", "full", "none"]
    v = {r.method: r.dm_value for r in rows}
    assert v["signal"] >= max(v["full"], v["none"]) - 1e-7
    assert all(r.status == "ok" for r in rows)
    assert all(0.0 <= r.dm_value <= 1.0 for r in rows)


def test_grid_cell_count():
    cfg = small_config(costs=(0.0, 0.25, 0.5), deltas=(0.0, 0.5, 1.0), mc_samples=100)
    assert len(cfg.cells()) == 4 * 9
    axis0 = cfg.cells()[:9]
    assert all(c[1:] == (0.25, 0.25, 0.25) and d[1:] == (0.5, 0.5, 0.5) for c, d in axis0)
    assert len(dataclasses.replace(cfg, grid_mode="product").cells()) == 9


def test_row_count():
    cfg = small_config(costs=(0.0, 0.5), deltas=(0.5,), sigma2=(0.1, 1.0), mc_samples=100)
    rows = run_sweep(cfg)
    assert len(rows) == len(cfg.cells()) * len(cfg.methods) * len(cfg.sigma2)


def test_zero_delta_cell_all_zero():
    rows = run_sweep(small_config(grid_mode="product", costs=(0.25,), deltas=(0.0,)))
    assert [r.dm_value for r in rows] == [0.0, 0.0, 0.0]


def test_csv_deterministic_without_timing():
    cfg = small_config(costs=(0.0, 0.5), record_timing=False, mc_samples=200)
    a, b = rows_to_csv(run_sweep(cfg)), rows_to_csv(run_sweep(cfg))
    assert a == b
    assert a.splitlines()[0] == ",".join(CSV_HEADER)


def test_parallel_matches_sequential():
    cfg = small_config(costs=(0.0, 0.5), deltas=(0.5, 1.0), record_timing=False, mc_samples=200)
    assert rows_to_csv(run_sweep(cfg, workers=2)) == rows_to_csv(run_sweep(cfg))


def test_roster_sums_subjects():
    roster = synthetic_roster(3, 4, seed=5)
    cfg = small_config(grid_mode="product", subjects=roster, mc_samples=200)
    rows = run_sweep(cfg)
    singles = [
        run_sweep(small_config(grid_mode="product", subjects=roster[i : i + 1], mc_samples=200)) for i in range(3)
    ]
    for k, r in enumerate(rows):
        assert r.dm_value == pytest.approx(sum(s[k].dm_value for s in singles), abs=1e-12)
        assert len(r.per_subject) == 3


def test_approx_method_row():
    rows = run_sweep(small_config(grid_mode="product", methods=("signal", "approx"), epsilon=0.4, delta=0.2))
    approx = rows[1]
    assert approx.method == "approx" and approx.status.startswith("ok")
    assert "eps=0.4" in approx.status and "K=" in approx.status
    assert approx.bic_slack >= -0.4 - 1e-7


def test_dominance_violation_detected():
    good = SweepRow(0.1, (0.0,), (0.0,), "signal", 0.2, 0.0, 0.0, 1, "ok", (0.2,))
    bad = SweepRow(0.1, (0.0,), (0.0,), "full", 0.5, 0.0, 0.0, 1, "ok", (0.5,))
    assert check_dominance([good, bad])
    assert not check_dominance([good, dataclasses.replace(bad, dm_value=0.1, per_subject=(0.1,))])


def test_solver_error_recorded(monkeypatch):
    import recourse_signaling.harness as h

    def boom(*a, **k):
        raise RuntimeError("stalled")

    monkeypatch.setattr(h, "solve_optimal_policy", boom)
    rows = run_sweep(small_config(grid_mode="product"))
    assert rows[0].status.startswith("error") and np.isnan(rows[0].dm_value)
    assert rows[1].status == "ok"


def test_config_validation():
    with pytest.raises(InvalidInputError):
        small_config(costs=())
    with pytest.raises(InvalidInputError):
        small_config(mc_samples=0)
    with pytest.raises(InvalidInputError):
        small_config(methods=("signal", "magic"))
    with pytest.raises(InvalidInputError):
        small_config(methods=("approx",))


def test_sweep_config_from_json():
    cfg = sweep_config_from_json({
        "instance": "heloc",
        "prior": {"sigma2": [0.1, 0.4]},
        "grid": {"costs": [0, 0.5], "deltas": [1.0]},
        "seed": 4,
        "mc_samples": 100,
        "subjects": {"mode": "roster", "n": 2, "seed": 9},
    })
    assert cfg.sigma2 == (0.1, 0.4) and cfg.roster().shape == (2, 4)
    custom = sweep_config_from_json({
        "instance": {"x0": [0.0], "actions": [{"label": "up", "direction": [1.0], "dm_utility": 1.0}]},
        "prior": {"mean": [1.0, -0.5], "sigma2": [0.2]},
        "grid": {"costs": [0.3], "deltas": [1.0], "mode": "product"},
        "seed": 1,
    })
    assert custom.cells() == [((0.3,), (1.0,))]
    with pytest.raises(InvalidInputError):
        sweep_config_from_json({"instance": "heloc", "prior": {"sigma2": [0.1]}, "grid": {"costs": [0], "deltas": [0]}})


def test_normalize_dm_utilities():
    tmpl, _ = heloc_fixture(dm_utilities=(2.0, 4.0, 0.0, 1.0))
    inst = normalize_dm_utilities(tmpl.instantiate(0.1, 0.5))
    np.testing.assert_allclose(inst.dm_utilities, [0.0, 0.5, 1.0, 0.0, 0.25])


def test_run_sweep_raises_on_dominance_failure(monkeypatch):
    import recourse_signaling.harness as h

    monkeypatch.setattr(h, "full_information_value", lambda inst, disc: 2.0)
    with pytest.raises(DominanceViolation) as info:
        run_sweep(small_config(grid_mode="product"))
    assert len(info.value.rows) == 3
