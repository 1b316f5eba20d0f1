import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recourse_signaling import (
    DiscretePrior,
    Instance,
    InvalidInputError,
    SignalingPolicy,
    build_opt_lp,
    enumerate_regions,
    expected_dm_utility,
    full_information_value,
    honest_policy,
    no_information_value,
    solve_optimal_policy,
    verify_bic,
)
from recourse_signaling.exact import region_utilities
from recourse_signaling.oned import OneDExample, bic_q, discretize, discretize_probs, RegionProbs
from recourse_signaling.regions import Region, RegionKey

from instances import random_instance, three_region_instance
from oracles import grid_signaling_value, scipy_signaling_value


def one_region(n_actions=2):
    return [Region(RegionKey((True,) * n_actions), 1.0, (0,))]


def test_lp_shape_one_region():
    inst = Instance.build([0.0], [([1.0], 0.5, 1.0)])
    lp = build_opt_lp(inst, one_region())
    assert lp.n_vars == 2 and lp.G.shape == (4, 2) and lp.A.shape == (1, 2)
    assert not lp.G[0].any() and not lp.G[3].any()


def test_lp_shape_three_regions():
    inst = Instance.build([0.0], [([1.0], 0.5, 1.0)])
    regs = [Region(RegionKey(k), 1 / 3, (i,)) for i, k in enumerate([(False, True), (True, False), (True, True)])]
    lp = build_opt_lp(inst, regs)
    assert lp.n_vars == 6 and lp.G.shape == (4, 6) and lp.A.shape == (3, 6)


def test_lp_rejects_bad_regions():
    inst = Instance.build([0.0], [([1.0], 0.5, 1.0)])
    with pytest.raises(InvalidInputError):
        build_opt_lp(inst, [])
    with pytest.raises(InvalidInputError):
        build_opt_lp(inst, [Region(RegionKey((True, True)), 0.5, (0,))])


def test_bic_row_matches_closed_form_algebra():
    pL, pM, pH, c, q = 0.2, 0.3, 0.5, 0.8, 0.37
    inst, prior = discretize_probs(0.0, 1.0, c, RegionProbs(pL, pM, pH))
    regs = enumerate_regions(inst, prior)
    lp = build_opt_lp(inst, regs)
    # policy: always a1 in M, a1 with probability q in the merged L/H region
    P = {"01": [0.0, 1.0], "11": [1 - q, q]}
    x = np.concatenate([P[r.key.bits] for r in regs])
    row = lp.G[1 * 2 + 0]  # (a1, a_null)
    assert row @ x == pytest.approx(-q * (pL + pH) * c + pM * (2 - c), abs=1e-12)


def test_indifferent_single_region():
    # both actions accepted, a1 free: subject indifferent, decision maker wants a1
    inst = Instance.build([0.0], [([1.0], 0.0, 1.0)])
    rep = solve_optimal_policy(inst, DiscretePrior([[1.0, 1.0]], [1.0]))
    assert rep.dm_value == pytest.approx(1.0)
    assert rep.bic_slack >= -1e-7


def test_oned_value_matches_closed_form():
    ex = OneDExample(660.0, 40.0, 0.7, -650.0, 50.0)
    inst, prior = discretize(ex)
    rep = solve_optimal_policy(inst, prior)
    from recourse_signaling.oned import region_probs

    pM = region_probs(ex).pM
    assert rep.dm_value == pytest.approx(pM + bic_q(pM, 0.7) * (1 - pM), abs=1e-8)
    assert full_information_value(inst, prior) == pytest.approx(pM, abs=1e-12)


def test_point_mass_equals_full_information():
    rng = np.random.default_rng(2)
    for _ in range(30):
        inst, _ = random_instance(rng)
        th = rng.normal(size=inst.dim + 1)
        prior = DiscretePrior.point_mass(th)
        assert solve_optimal_policy(inst, prior).dm_value == pytest.approx(full_information_value(inst, prior), abs=1e-9)


def test_full_information_all_positive_is_zero():
    inst = Instance.build([0.0], [([1.0], 0.3, 1.0), ([2.0], 0.1, 1.0)])
    prior = DiscretePrior([[1.0, 5.0], [1.0, 3.0]], [0.5, 0.5])
    assert full_information_value(inst, prior) == 0.0


def test_unbounded_gap_full_information():
    from recourse_signaling.oned import unbounded_instance

    g = unbounded_instance(0.1)
    inst, prior = discretize_probs(0.0, 1.0, g.cost, RegionProbs(0.5 * (1 - g.pM), g.pM, 0.5 * (1 - g.pM)))
    assert full_information_value(inst, prior) == pytest.approx(0.09, abs=1e-12)


def test_no_information_threshold():
    inst, prior = discretize_probs(0.0, 1.0, 0.5, RegionProbs(0.4, 0.2, 0.4))
    assert no_information_value(inst, prior) == (0, 0.0)
    inst, prior = discretize_probs(0.0, 1.0, 0.5, RegionProbs(0.3, 0.3, 0.4))
    assert no_information_value(inst, prior) == (1, 1.0)


def test_no_information_exact_tie_goes_to_cheapest():
    # 2 pM = c exactly: the subject is indifferent and the tie rule picks the null action
    inst, prior = discretize_probs(0.0, 1.0, 0.5, RegionProbs(0.25, 0.25, 0.5))
    assert no_information_value(inst, prior) == (0, 0.0)


def test_no_information_all_same_classification():
    inst = Instance.build([0.0], [([0.0], 0.2, 1.0), ([0.0], 0.1, 1.0)])
    prior = DiscretePrior.uniform([[1.0, 1.0], [1.0, -1.0]])
    assert no_information_value(inst, prior)[0] == 0


def test_verify_bic_examples():
    inst, prior = discretize_probs(0.0, 1.0, 0.8, RegionProbs(0.2, 0.3, 0.5))
    regs = enumerate_regions(inst, prior)
    assert verify_bic(inst, regs, honest_policy(inst, regs)) >= 0
    q = bic_q(0.3, 0.8)
    pol = SignalingPolicy(tuple(r.key for r in regs), np.array([[0.0, 1.0], [1 - q, q]]))
    assert verify_bic(inst, regs, pol) == pytest.approx(0.0, abs=1e-12)


def test_verify_bic_costly_useless_action():
    inst = Instance.build([0.0], [([0.0], 0.5, 1.0)])
    prior = DiscretePrior.uniform([[1.0, 1.0], [1.0, -1.0]])
    regs = enumerate_regions(inst, prior)
    pol = SignalingPolicy(tuple(r.key for r in regs), np.tile([0.0, 1.0], (len(regs), 1)))
    assert verify_bic(inst, regs, pol) == pytest.approx(-0.5)
    assert expected_dm_utility(inst, regs, pol) == pytest.approx(1.0)


def test_verify_bic_missing_region():
    inst, prior = three_region_instance()
    regs = enumerate_regions(inst, prior)
    pol = SignalingPolicy((regs[0].key,), np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        verify_bic(inst, regs, pol)


def test_expected_utility_of_solution():
    inst, prior = discretize(OneDExample(660.0, 40.0, 0.5, -650.0, 50.0))
    rep = solve_optimal_policy(inst, prior)
    assert expected_dm_utility(inst, rep.regions, rep.policy) == pytest.approx(rep.dm_value, abs=1e-9)
    # honest policy in an all-positive world always recommends the null action
    allpos = DiscretePrior([[1.0, 1000.0]], [1.0])
    regs = enumerate_regions(inst, allpos)
    assert expected_dm_utility(inst, regs, honest_policy(inst, regs)) == 0.0


def test_zero_mass_regions_dropped():
    inst, _ = three_region_instance()
    prior = DiscretePrior([[1.0, -1.5], [1.0, -0.5], [1.0, 0.5]], [0.5, 0.0, 0.5])
    rep = solve_optimal_policy(inst, prior)
    assert len(rep.regions) == 2 and all(r.mass > 0 for r in rep.regions)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2**31))
def test_random_instances_against_scipy(seed):
    inst, prior = random_instance(np.random.default_rng(seed))
    rep = solve_optimal_policy(inst, prior)
    U = region_utilities(inst, rep.regions)
    ref = scipy_signaling_value(U, rep.region_masses, inst.dm_utilities)
    assert rep.dm_value == pytest.approx(ref, abs=1e-7)
    assert rep.bic_slack >= -1e-7
    assert rep.dm_value >= full_information_value(inst, prior) - 1e-7
    assert rep.dm_value >= no_information_value(inst, prior)[1] - 1e-7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_grid_oracle_small_instances(seed):
    rng = np.random.default_rng(seed)
    inst = Instance.build([0.0], [([float(rng.uniform(0.1, 2))], float(rng.uniform(0, 2.5)), float(rng.uniform(-1, 2)))])
    support = [[1.0, float(rng.uniform(-3, 1))] for _ in range(int(rng.integers(1, 4)))]
    prior = DiscretePrior.uniform(support)
    rep = solve_optimal_policy(inst, prior)
    if len(rep.regions) > 2:
        return
    U = region_utilities(inst, rep.regions)
    ref = grid_signaling_value(U, rep.region_masses, inst.dm_utilities)
    assert rep.dm_value == pytest.approx(ref, abs=1e-2)
    assert rep.dm_value >= ref - 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 10))
def test_utility_scaling(seed, lam):
    inst, prior = random_instance(np.random.default_rng(seed))
    base = solve_optimal_policy(inst, prior).dm_value
    scaled = solve_optimal_policy(inst.with_dm_utilities(lam * inst.dm_utilities), prior).dm_value
    assert scaled == pytest.approx(lam * base, abs=1e-7 * max(1.0, lam))


def test_three_region_instance_value():
    inst, prior = three_region_instance()
    rep = solve_optimal_policy(inst, prior)
    assert [r.key.bits for r in rep.regions] == ["001", "011", "111"]
    U = region_utilities(inst, rep.regions)
    assert rep.dm_value == pytest.approx(scipy_signaling_value(U, rep.region_masses, inst.dm_utilities), abs=1e-9)
