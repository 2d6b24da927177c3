import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import float_params, float_states, random_float_state, rational_params, rational_states
from twolocus import (
    GameteState,
    RecombinationParams,
    StopCriterion,
    Tolerance,
    alpha_of,
    eigenvalues,
    estimate_rate,
    iterate,
    linkage_disequilibrium,
    predicted_limit,
    run_to_convergence,
    step_additive,
    validate,
    verify_against_oracle,
)
from twolocus.errors import MaxStepsExceeded, RateUndefined
from twolocus.state import max_norm

F = Fraction
EXAMPLE = GameteState(F(2, 5), F(1, 5), F(1, 10), F(3, 10))
HALF = RecombinationParams(F(1, 2), F(1, 2))
FLOAT_EXAMPLE = validate(0.4, 0.2, 0.1, 0.3)
FLOAT_HALF = RecombinationParams(0.5, 0.5)


def test_iterate_one_step():
    t = iterate(EXAMPLE, HALF, 1)
    assert t.states[-1] == GameteState(F(7, 20), F(1, 4), F(3, 20), F(1, 4))
    assert t.d_values == (F(-1, 10), F(-1, 20))
    assert t.steps == (0, 1)


def test_iterate_zero_steps():
    t = iterate(EXAMPLE, HALF, 0)
    assert t.states == (EXAMPLE,) and len(t) == 1


def test_iterate_fixed_point_is_constant():
    s = GameteState(F(3, 10), F(3, 10), F(1, 5), F(1, 5))
    t = iterate(s, RecombinationParams(F(1, 3), F(1)), 100)
    assert set(t.states) == {s}


@given(rational_states(), rational_params)
def test_iterate_is_repeated_step(s, p):
    t = iterate(s, p, 6)
    for k in range(6):
        assert t.states[k + 1] == step_additive(t.states[k], p)
        assert t.d_values[k] == linkage_disequilibrium(t.states[k])


def test_iterate_with_stride():
    t = iterate(FLOAT_EXAMPLE, FLOAT_HALF, 10, stride=3)
    assert t.steps == (0, 3, 6, 9, 10)
    full = iterate(FLOAT_EXAMPLE, FLOAT_HALF, 10)
    assert t.states[-1] == full.states[-1] and t.states[2] == full.states[6]


def test_run_to_convergence_example():
    report = run_to_convergence(FLOAT_EXAMPLE, FLOAT_HALF, StopCriterion(1e-10))
    assert report.converged
    assert report.oracle_state.as_tuple() == pytest.approx((0.3, 0.3, 0.2, 0.2), abs=1e-15)
    assert report.oracle_gap <= 1e-9
    # error 0.1 * 0.5**n crosses 1e-10 near n = 30
    assert 28 <= report.steps_taken <= 35
    assert report.theoretical_rate == pytest.approx(0.5)
    assert report.estimated_rate == pytest.approx(0.5, rel=1e-6)


def test_run_to_convergence_fixed_point():
    s = validate(0.3, 0.3, 0.2, 0.2)
    report = run_to_convergence(s, FLOAT_HALF)
    assert report.steps_taken == 1 and report.oracle_gap == 0
    assert report.estimated_rate is None


def test_run_to_convergence_identity_map():
    report = run_to_convergence(FLOAT_EXAMPLE, RecombinationParams(0.0, 0.0))
    assert report.steps_taken == 0 and report.converged
    assert report.oracle_state == FLOAT_EXAMPLE and report.final_state == FLOAT_EXAMPLE


def test_run_to_convergence_rational():
    report = run_to_convergence(EXAMPLE, HALF)
    assert report.oracle_state == GameteState(F(3, 10), F(3, 10), F(1, 5), F(1, 5))
    assert isinstance(report.oracle_gap, Fraction) and report.oracle_gap <= F(1, 10**10)
    assert report.estimated_rate == 0.5


def test_max_steps_exceeded_carries_report():
    with pytest.raises(MaxStepsExceeded) as info:
        run_to_convergence(FLOAT_EXAMPLE, RecombinationParams(0.01, 0.0), StopCriterion(1e-12, 50))
    report = info.value.report
    assert not report.converged and report.steps_taken == 50
    assert len(report.trajectory) == 51


def test_stop_rule_accounts_for_slow_contraction():
    # lambda2 = 0.99: stopping on the successive difference alone would leave
    # a gap ~99 times larger than eps
    s = validate(0.1, 0.4, 0.3, 0.2)
    p = RecombinationParams(0.0, 0.02)
    assert eigenvalues(alpha_of(s), p).lambda2 == pytest.approx(0.99)
    report = run_to_convergence(s, p, StopCriterion(1e-10))
    assert report.oracle_gap <= 1e-10 * 1.01


def test_estimate_rate_twenty_steps():
    assert estimate_rate(iterate(FLOAT_EXAMPLE, FLOAT_HALF, 20)) == pytest.approx(0.5, abs=1e-6)


def test_estimate_rate_constant_orbit():
    with pytest.raises(RateUndefined):
        estimate_rate(iterate(validate(0.3, 0.3, 0.2, 0.2), FLOAT_HALF, 10))


def test_estimate_rate_instant_convergence():
    # alpha = 0.6, a = b = 1: lambda2 = 1 - 0.4 - 0.6 = 0
    p = RecombinationParams(1.0, 1.0)
    assert estimate_rate(iterate(FLOAT_EXAMPLE, p, 5)) == 0.0
    report = run_to_convergence(FLOAT_EXAMPLE, p)
    assert report.estimated_rate == 0.0 and report.steps_taken <= 2


def test_estimate_rate_with_stride():
    t = iterate(FLOAT_EXAMPLE, RecombinationParams(0.1, 0.2), 100, stride=10)
    lam = eigenvalues(0.6, RecombinationParams(0.1, 0.2)).lambda2
    assert estimate_rate(t) == pytest.approx(lam, rel=1e-6)


def test_verify_example_all_pass():
    result = verify_against_oracle(FLOAT_EXAMPLE, FLOAT_HALF)
    assert result.passed, result.checks


def test_verify_edge_state_passes_trivially():
    for p in (FLOAT_HALF, RecombinationParams(1.0, 0.0), RecombinationParams(0.0, 0.0)):
        result = verify_against_oracle(validate(0, 0, 0.7, 0.3), p)
        assert result.passed
        assert set(result.report.trajectory.states) == {validate(0, 0, 0.7, 0.3)}


def test_verify_rational_exact_decay():
    # eps small enough that the run goes past 60 steps with exact D checks
    crit = StopCriterion(F(1, 10**30), 200)
    result = verify_against_oracle(EXAMPLE, HALF, crit)
    assert result.passed
    t = result.report.trajectory
    assert len(t) > 60
    assert all(d == F(1, 2) ** k * F(-1, 10) for k, d in zip(t.steps, t.d_values))


def test_verify_propagates_max_steps():
    with pytest.raises(MaxStepsExceeded):
        verify_against_oracle(FLOAT_EXAMPLE, RecombinationParams(0.01, 0.0), StopCriterion(1e-12, 10))


@given(float_states(), float_params)
def test_trajectory_states_stay_on_simplex(s, p):
    t = iterate(s, p, 25)
    for state in t.states:
        assert all(c >= -1e-12 for c in state)
        assert abs(sum(state) - 1) <= 1e-12


def test_oracle_agreement_random():
    rng = random.Random(5)
    for _ in range(300):
        a, b = rng.random(), rng.random()
        if a + b < 0.1:
            continue
        s = random_float_state(rng, (0.05, 0.95))
        report = run_to_convergence(s, RecombinationParams(a, b), StopCriterion(1e-10))
        assert report.oracle_gap <= 10 * 1e-10
        assert report.oracle_state == predicted_limit(s, RecombinationParams(a, b), Tolerance.floating())
