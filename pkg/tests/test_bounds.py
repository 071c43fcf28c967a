import itertools
import math

import numpy as np
import pytest
from scipy.stats import binom

from delayed_bandits.bounds import (
    BoundInput,
    check_reveal_concentration,
    kl_bernoulli,
    minimize_bound,
    se_bound,
    ts_multi_arm_bound,
    ts_two_arm_bound,
)
from delayed_bandits.delays import (
    FixedDelay,
    GeometricDelay,
    PacketLossDelay,
    QueueDelay,
)
from delayed_bandits.env import BanditInstance

LOG_1E4 = math.log(10_000)


def _zero_delay_input(gaps, horizon=10_000):
    return BoundInput(horizon, tuple(gaps), tuple(lambda q: 0 for _ in gaps))


def _model_input(gaps, model, horizon=10_000):
    fns = tuple(
        (lambda q, arm=i: model.quantile(arm, q)) for i in range(len(gaps))
    )
    return BoundInput(horizon, tuple(gaps), fns)


# ---------------------------------------------------------------- KL


def test_kl_zero_iff_equal():
    assert kl_bernoulli(0.5, 0.5) == 0.0
    assert kl_bernoulli(0.3, 0.3) == 0.0
    assert kl_bernoulli(0.31, 0.3) > 0.0


def test_kl_asymmetry():
    a = kl_bernoulli(0.425, 0.4)
    b = kl_bernoulli(0.4, 0.425)
    assert a > 0 and b > 0 and a != b


def test_kl_frozen_value():
    # 0.3 ln(3/7) + 0.7 ln(7/3), computed independently
    assert kl_bernoulli(0.3, 0.7) == pytest.approx(0.33891914415488145, rel=1e-12)


def test_kl_rejects_boundaries():
    for y, mu in [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)]:
        with pytest.raises(ValueError):
            kl_bernoulli(y, mu)


def test_kl_dominates_pinsker_on_grid():
    grid = np.linspace(0.05, 0.95, 19)
    for y in grid:
        for mu in grid:
            assert kl_bernoulli(y, mu) >= 2 * (y - mu) ** 2 - 1e-12


# ---------------------------------------------------------------- inputs


def test_bound_input_validation():
    with pytest.raises(ValueError):
        BoundInput(1, (0.0, 0.2), (lambda q: 0, lambda q: 0))  # horizon too small
    with pytest.raises(ValueError):
        BoundInput(100, (0.1, 0.2), (lambda q: 0, lambda q: 0))  # no zero gap
    with pytest.raises(ValueError):
        BoundInput(100, (0.0, 0.0), (lambda q: 0, lambda q: 0))  # two zero gaps
    with pytest.raises(ValueError):
        BoundInput(100, (0.0, 1.5), (lambda q: 0, lambda q: 0))  # gap out of range


def test_bound_input_from_model():
    inp = BoundInput.from_model(
        BanditInstance([0.4, 0.45]), GeometricDelay(0.01), 3000
    )
    assert inp.optimal_arm == 1
    assert inp.gaps == pytest.approx((0.05, 0.0))
    assert inp.quantile_fns[0](0.5) == 68


# ---------------------------------------------------------------- evaluators


def test_two_arm_zero_delay_frozen_value():
    inp = _zero_delay_input((0.0, 0.2))
    got = ts_two_arm_bound(inp, 1.0, 1.0)
    # independent arithmetic: 48 lnT/0.2 + 30*(32 lnT/0.2 + 0.2)
    oracle = 48 * LOG_1E4 / 0.2 + (6 / 0.2) * (32 * LOG_1E4 / 0.2 + 0.2)
    assert got == pytest.approx(oracle, rel=1e-12)
    assert got == pytest.approx(46426.115474759965, rel=1e-9)


def test_two_arm_infinite_quantile_propagates():
    model = PacketLossDelay([0.9, 0.4])
    inp = _model_input((0.0, 0.2), model)
    assert math.isinf(ts_two_arm_bound(inp, 0.5, 0.6))  # q2 > p2
    assert math.isfinite(ts_two_arm_bound(inp, 0.5, 0.4))


def test_two_arm_fixed_delay_adds_expected_terms():
    d = 250
    base = ts_two_arm_bound(_zero_delay_input((0.0, 0.2)), 1.0, 1.0)
    delayed = ts_two_arm_bound(_model_input((0.0, 0.2), FixedDelay(d)), 1.0, 1.0)
    # extra cost: (6/gap) * d * gap + d * gap = 6d + d*gap
    assert delayed - base == pytest.approx(6 * d + d * 0.2, rel=1e-12)


def test_two_arm_rejects_bad_levels_and_arm_count():
    inp = _zero_delay_input((0.0, 0.2))
    with pytest.raises(ValueError):
        ts_two_arm_bound(inp, 0.0, 0.5)
    with pytest.raises(ValueError):
        ts_two_arm_bound(inp, 0.5, 1.5)
    with pytest.raises(ValueError):
        ts_two_arm_bound(_zero_delay_input((0.0, 0.2, 0.3)), 0.5, 0.5)


def test_multi_arm_zero_delay_hand_computed():
    gaps = (0.0, 0.1, 0.2)
    inp = _zero_delay_input(gaps)
    got = ts_multi_arm_bound(inp, [1.0, 1.0, 1.0])
    oracle = 4 * 2.0
    for g in (0.1, 0.2):
        oracle += 48 * LOG_1E4 / g + (6 / g) * (32 * LOG_1E4 / g + g)
    assert got == pytest.approx(oracle, rel=1e-12)


def test_multi_arm_infinite_quantile_propagates():
    model = PacketLossDelay([0.9, 0.9, 0.1])
    inp = _model_input((0.0, 0.1, 0.2), model)
    assert math.isinf(ts_multi_arm_bound(inp, [0.5, 0.5, 0.5]))


def test_multi_arm_symmetric_under_suboptimal_permutation():
    inp = _model_input((0.0, 0.2, 0.2), FixedDelay(10))
    v1 = ts_multi_arm_bound(inp, [0.8, 0.3, 0.7])
    v2 = ts_multi_arm_bound(inp, [0.8, 0.7, 0.3])
    assert v1 == pytest.approx(v2, rel=1e-12)


def test_se_two_arm_frozen_value():
    inp = _zero_delay_input((0.0, 0.2))
    got = se_bound(inp, [1.0, 1.0])
    assert got == pytest.approx(2 * 40 * LOG_1E4 / 0.2, rel=1e-12)
    assert got == pytest.approx(3684.1361487904737, rel=1e-9)


def test_se_two_arm_fixed_delay_plug_in():
    d = 100
    base = se_bound(_zero_delay_input((0.0, 0.2)), [1.0, 1.0])
    delayed = se_bound(_model_input((0.0, 0.2), FixedDelay(d)), [1.0, 1.0])
    assert delayed - base == pytest.approx(math.log(2) * 2 * d * 0.2, rel=1e-12)


def test_se_delay_cost_grows_logarithmically_in_k():
    values = []
    for k in (2, 4, 8):
        gaps = (0.0,) + (0.2,) * (k - 1)
        inp = _model_input(gaps, FixedDelay(50))
        v = se_bound(inp, [0.5] * k)
        per_arm = (40 * math.log(10_000) / 0.2) * (1 / 0.5 + 1 / 0.5) * (k - 1)
        values.append(v - per_arm)
    assert values[0] == pytest.approx(math.log(2) * 100 * 0.2, rel=1e-12)
    assert values[1] / values[0] == pytest.approx(math.log(4) / math.log(2), rel=1e-12)
    assert values[2] / values[0] == pytest.approx(math.log(8) / math.log(2), rel=1e-12)


# ---------------------------------------------------------------- monotonicity


@pytest.mark.parametrize(
    "evaluator,k", [(ts_two_arm_bound, 2), (ts_multi_arm_bound, 3), (se_bound, 2), (se_bound, 4)]
)
def test_bounds_decrease_when_levels_rise_under_fixed_delay(evaluator, k):
    # with a constant quantile, every 1/q term falls as q grows
    gaps = (0.0,) + tuple(0.1 * (i + 1) for i in range(k - 1))
    inp = _model_input(gaps, FixedDelay(30))
    levels = [0.2, 0.5, 0.9]
    values = []
    for q in levels:
        if evaluator is ts_two_arm_bound:
            values.append(evaluator(inp, q, q))
        else:
            values.append(evaluator(inp, [q] * k))
    assert values[0] > values[1] > values[2]


def test_bounds_increase_with_larger_quantiles():
    small = _model_input((0.0, 0.2), FixedDelay(10))
    large = _model_input((0.0, 0.2), FixedDelay(500))
    assert ts_two_arm_bound(small, 0.5, 0.5) < ts_two_arm_bound(large, 0.5, 0.5)
    assert se_bound(small, [0.5, 0.5]) < se_bound(large, [0.5, 0.5])


# ---------------------------------------------------------------- minimize


def test_minimize_fixed_delay_argmin_at_one():
    inp = _model_input((0.0, 0.2), FixedDelay(250))
    for evaluator in (ts_two_arm_bound, se_bound):
        result = minimize_bound(evaluator, inp)
        assert result.q == (1.0, 1.0)
    inp3 = _model_input((0.0, 0.1, 0.2), FixedDelay(250))
    for evaluator in (ts_multi_arm_bound, se_bound):
        result = minimize_bound(evaluator, inp3)
        assert result.q == (1.0, 1.0, 1.0)


def test_minimize_packet_loss_respects_feasibility():
    inp = _model_input((0.0, 0.2), PacketLossDelay(0.5))
    for evaluator in (ts_two_arm_bound, se_bound):
        result = minimize_bound(evaluator, inp)
        assert math.isfinite(result.value)
        assert all(q <= 0.5 for q in result.q)
        assert result.q == (0.5, 0.5)  # largest feasible level wins


def test_minimize_all_infinite_grid_flagged():
    inp = _model_input((0.0, 0.2), PacketLossDelay(0.01))  # below every grid level
    result = minimize_bound(ts_two_arm_bound, inp)
    assert math.isinf(result.value)
    assert any("infinite" in note for note in result.omitted)


def test_minimize_value_beats_every_grid_point_two_arm():
    model = GeometricDelay(0.01)
    inp = _model_input((0.0, 0.1), model)
    result = minimize_bound(ts_two_arm_bound, inp)
    grid = [i / 20 for i in range(1, 21)]
    for q1 in grid:
        for q2 in grid:
            assert result.value <= ts_two_arm_bound(inp, q1, q2) + 1e-9


@pytest.mark.parametrize("evaluator", [ts_multi_arm_bound, se_bound])
def test_minimize_matches_brute_force_three_arms(evaluator):
    model = GeometricDelay(0.05)
    inp = _model_input((0.0, 0.15, 0.4), model)
    result = minimize_bound(evaluator, inp, grid_step=0.1)
    grid = [i / 10 for i in range(1, 11)]
    brute = min(
        evaluator(inp, list(q)) for q in itertools.product(grid, repeat=3)
    )
    assert result.value == pytest.approx(brute, rel=1e-12)


def test_minimize_se_max_coupling_brute_force():
    # heterogeneous delays make the max term bind on different arms
    model = PacketLossDelay([0.9, 0.6, 0.35])
    inp = _model_input((0.0, 0.3, 0.8), model)
    result = minimize_bound(se_bound, inp, grid_step=0.1)
    grid = [i / 10 for i in range(1, 11)]
    brute = min(
        se_bound(inp, list(q)) for q in itertools.product(grid, repeat=3)
    )
    assert result.value == pytest.approx(brute, rel=1e-12)
    assert math.isfinite(result.value)


def test_minimize_respects_minimum_resolution():
    inp = _model_input((0.0, 0.2), FixedDelay(1))
    with pytest.raises(ValueError):
        minimize_bound(ts_two_arm_bound, inp, grid_step=0.2)
    with pytest.raises(ValueError):
        minimize_bound(lambda *a: 0.0, inp)


def test_minimize_omission_notes_present():
    inp = _model_input((0.0, 0.2), FixedDelay(1))
    assert minimize_bound(ts_two_arm_bound, inp).omitted
    assert not minimize_bound(se_bound, inp).omitted
    inp3 = _model_input((0.0, 0.2, 0.4), FixedDelay(1))
    assert len(minimize_bound(ts_multi_arm_bound, inp3).omitted) == 2


# ---------------------------------------------------------------- diagnostic


def test_concentration_fixed_delay_never_violates():
    report = check_reveal_concentration(FixedDelay(5), 0, 0.5, [50, 100], 2000, seed=1)
    assert report.quantile == 5
    assert report.estimates == (0.0, 0.0)
    assert report.passed


def test_concentration_geometric_passes():
    report = check_reveal_concentration(
        GeometricDelay(0.1), 0, 0.5, [200], 10_000, seed=2
    )
    assert report.passed
    assert report.bounds[0] == pytest.approx(math.exp(-12.5))


def test_concentration_packet_loss_matches_binomial_oracle():
    # reveals by m + d(0.5) with d = 0 are Binomial(m, 0.6)
    m, trials = 100, 10_000
    report = check_reveal_concentration(
        PacketLossDelay(0.6), 0, 0.5, [m], trials, seed=3
    )
    threshold = 0.5 * 0.5 * m  # violation: fewer than 25 reveals
    oracle = binom.cdf(math.ceil(threshold) - 1, m, 0.6)
    assert report.estimates[0] == pytest.approx(oracle, abs=3e-4 + 3 * math.sqrt(max(oracle, 1e-12) / trials))
    assert report.passed


def test_concentration_rejects_unusable_inputs():
    with pytest.raises(ValueError):
        check_reveal_concentration(QueueDelay(0.1), 0, 0.5, [10], 100)
    with pytest.raises(ValueError):
        check_reveal_concentration(PacketLossDelay(0.3), 0, 0.5, [10], 100)  # inf quantile
    with pytest.raises(ValueError):
        check_reveal_concentration(FixedDelay(1), 0, 1.5, [10], 100)
