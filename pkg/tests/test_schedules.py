import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from aisgd.errors import ConfigError, InvalidInputError
from aisgd.schedules import (AdaptiveState, OneDimSchedule, ScheduleConfig,
                             adagrad_step, fisher_step, limit_rate_constant,
                             onedim_rate, rmsprop_step)


@pytest.mark.parametrize("g0,a,c,n,expected", [
    (1.0, 1.0, 1.0, 1, 0.5),
    (2.0, 0.5, 2.0 / 3.0, 0, 2.0),
    (0.1, 2.0, 1.0, 4, 0.1 / 1.8),
])
def test_onedim_examples(g0, a, c, n, expected):
    assert onedim_rate(OneDimSchedule(g0, a, c), n) == pytest.approx(expected, rel=1e-15)


def test_onedim_limit():
    s = OneDimSchedule(1.0, 0.25, 1.0)
    n = 10 ** 6
    assert n * onedim_rate(s, n) == pytest.approx(limit_rate_constant(s), rel=0.01)
    with pytest.raises(ConfigError):
        limit_rate_constant(OneDimSchedule(1.0, 1.0, 0.6))


@given(st.floats(1e-3, 1e3), st.floats(1e-4, 10), st.floats(0.05, 1.0))
def test_onedim_is_decreasing(g0, a, c):
    s = OneDimSchedule(g0, a, c)
    rates = [onedim_rate(s, n) for n in range(0, 50)]
    assert all(b <= r for r, b in zip(rates, rates[1:]))
    assert rates[0] == g0


@pytest.mark.parametrize("kw", [dict(gamma0=0.0), dict(a=-1.0), dict(c=0.0), dict(c=1.5)])
def test_onedim_validation(kw):
    with pytest.raises(ConfigError):
        OneDimSchedule(**kw)


def test_adagrad_examples():
    st_ = AdaptiveState.zeros("adagrad", 2, epsilon=0.0)
    gamma, cond = adagrad_step(st_, [3.0, 4.0])
    assert gamma == 1.0
    np.testing.assert_allclose(cond, [1 / 3, 1 / 4], rtol=1e-15)

    st_ = AdaptiveState.zeros("adagrad", 1, eta=0.5)
    adagrad_step(st_, [1.0])
    _, cond = adagrad_step(st_, [1.0])
    np.testing.assert_array_equal(st_.accumulator, [2.0])
    assert cond[0] == pytest.approx(0.5 / math.sqrt(2 + 1e-6), rel=1e-15)


def test_adagrad_zero_gradient_keeps_accumulator():
    st_ = AdaptiveState.zeros("adagrad", 2)
    adagrad_step(st_, [1.0, 2.0])
    before = st_.accumulator.copy()
    _, cond = adagrad_step(st_, [0.0, 0.0])
    np.testing.assert_array_equal(st_.accumulator, before)
    np.testing.assert_allclose(cond, 1.0 / np.sqrt(before + 1e-6))


@pytest.mark.parametrize("beta,g,expected", [(0.9, [1.0], [0.1]), (0.0, [2.0], [4.0])])
def test_rmsprop_examples(beta, g, expected):
    st_ = AdaptiveState.zeros("rmsprop", 1, beta=beta)
    rmsprop_step(st_, g)
    np.testing.assert_allclose(st_.accumulator, expected, rtol=1e-15)


def test_rmsprop_full_discount_keeps_history():
    st_ = AdaptiveState("rmsprop", beta=1.0, accumulator=np.array([0.7]))
    rmsprop_step(st_, [123.0])
    np.testing.assert_array_equal(st_.accumulator, [0.7])


def test_fisher_examples():
    st_ = AdaptiveState("fisher", accumulator=np.array([9.0]))
    fisher_step(st_, [2.0])
    np.testing.assert_array_equal(st_.accumulator, [4.0])
    fisher_step(st_, [0.0])
    np.testing.assert_array_equal(st_.accumulator, [2.0])


@pytest.mark.parametrize("step,kind", [(adagrad_step, "adagrad"),
                                       (rmsprop_step, "rmsprop"),
                                       (fisher_step, "fisher")])
def test_non_finite_gradient_leaves_state(step, kind):
    st_ = AdaptiveState.zeros(kind, 2)
    step(st_, [1.0, 1.0])
    acc, n = st_.accumulator.copy(), st_.n
    with pytest.raises(InvalidInputError):
        step(st_, [np.nan, 1.0])
    np.testing.assert_array_equal(st_.accumulator, acc)
    assert st_.n == n


def test_step_kind_must_match_state():
    with pytest.raises(ConfigError):
        adagrad_step(AdaptiveState.zeros("fisher", 1), [1.0])


grads = arrays(float, (30, 3), elements=st.floats(-1e3, 1e3))


@settings(max_examples=50)
@given(grads)
def test_adagrad_accumulator_nondecreasing(gs):
    st_ = AdaptiveState.zeros("adagrad", 3)
    prev = st_.accumulator.copy()
    for g in gs:
        adagrad_step(st_, g)
        assert np.all(st_.accumulator >= prev)
        prev = st_.accumulator.copy()


@settings(max_examples=50)
@given(grads, st.floats(0, 1))
def test_rmsprop_is_convex_combination(gs, beta):
    st_ = AdaptiveState.zeros("rmsprop", 3, beta=beta)
    for g in gs:
        prev = st_.accumulator.copy()
        rmsprop_step(st_, g)
        np.testing.assert_array_equal(st_.accumulator, beta * prev + (1 - beta) * (g * g))


def test_schedule_config_default_exponent():
    assert ScheduleConfig().start(2, averaged=True).onedim.c == pytest.approx(2 / 3)
    assert ScheduleConfig().start(2, averaged=False).onedim.c == 1.0
    assert ScheduleConfig(c=0.5).start(2, averaged=True).onedim.c == 0.5


def test_scheduler_dispatch():
    sch = ScheduleConfig(gamma0=2.0, a=0.5, c=1.0).start(3)
    gamma, cond = sch.step(2)
    assert gamma == pytest.approx(2.0 / 3.0) and cond is None
    sch = ScheduleConfig(kind="fisher", epsilon=0.0).start(1)
    gamma, cond = sch.step(1, np.array([2.0]))
    assert gamma == 1.0
    np.testing.assert_array_equal(cond, [0.25])
    with pytest.raises(ConfigError):
        ScheduleConfig(kind="adam")
