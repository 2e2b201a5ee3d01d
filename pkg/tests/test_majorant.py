from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ostrowski_gruss import core
from ostrowski_gruss.core import FunctionSpec
from ostrowski_gruss.majorant import (
    MajorantCurve,
    bound_majorant,
    bound_sup_norm,
    eval_majorant,
    least_concave_majorant,
    majorant_curve,
    modulus,
    sampled_modulus,
    sampling_slack,
)
from ostrowski_gruss.weights import Beta, Interval, Uniform

UNIT = Interval(0.0, 1.0)
IDENTITY = FunctionSpec.polynomial([0.0, 1.0])
SQUARE = FunctionSpec.polynomial([0.0, 0.0, 1.0])
HALF_SQUARE = FunctionSpec.polynomial([0.0, 0.0, 0.5])


def brute_modulus(values, k):
    n = len(values)
    return max((abs(values[i] - values[j]) for i in range(n) for j in range(n) if abs(i - j) <= k), default=0.0)


def test_modulus_examples():
    assert modulus(IDENTITY, UNIT, 1001, 0.3) == pytest.approx(0.3, abs=1e-12)
    assert modulus(SQUARE, UNIT, 1025, 0.5) == pytest.approx(0.75, abs=1e-12)
    assert modulus(SQUARE, UNIT, 1025, 0.0) == 0.0
    with pytest.raises(ValueError):
        modulus(SQUARE, UNIT, 1025, 1.5)
    with pytest.raises(ValueError):
        modulus(SQUARE, UNIT, 1, 0.5)


def test_modulus_matches_pair_search():
    f = FunctionSpec.polynomial([0.1, -1.3, 0.4, 1.7])
    values = f(UNIT.grid(41))
    s, omega = sampled_modulus(f, UNIT, 41)
    for k in range(41):
        assert omega[k] == pytest.approx(brute_modulus(values, k), abs=1e-15)


def test_sampled_modulus_is_read_only():
    _, omega = sampled_modulus(SQUARE, UNIT, 65)
    with pytest.raises(ValueError):
        omega[1] = 0.0


def test_hull_examples():
    curve = least_concave_majorant([(0, 0), (0.2, 0.2), (0.8, 0.2), (1, 0.4)])
    assert curve.knots == [(0.0, 0.0), (0.2, 0.2), (1.0, 0.4)]
    assert eval_majorant(curve, 0.8) == pytest.approx(0.35)
    assert eval_majorant(curve, 0.0) == 0.0
    assert eval_majorant(curve, 0.2) == pytest.approx(0.2)
    line = least_concave_majorant([(0, 0), (1, 1)])
    assert line.knots == [(0.0, 0.0), (1.0, 1.0)]
    assert line(0.37) == pytest.approx(0.37)
    with pytest.raises(ValueError):
        eval_majorant(curve, 1.2)


def test_hull_of_concave_samples_is_identity():
    s = np.linspace(0, 1, 201)
    curve = least_concave_majorant((s, 2 * s - s * s))
    assert_allclose(eval_majorant(curve, s), 2 * s - s * s, atol=1e-15)


def test_hull_rejects_bad_samples():
    with pytest.raises(ValueError):
        least_concave_majorant([(0.1, 0), (1, 1)])
    with pytest.raises(ValueError):
        least_concave_majorant([(0, 0), (0.5, 1), (1, 0.5)])
    with pytest.raises(ValueError):
        MajorantCurve(np.array([0.0, 0.5, 1.0]), np.array([0.0, 0.1, 1.0]))


@given(st.lists(st.floats(0, 1), min_size=1, max_size=40))
def test_hull_dominates_and_is_concave(increments):
    ys = np.concatenate([[0.0], np.cumsum(increments)])
    xs = np.linspace(0.0, 1.0, ys.size)
    curve = least_concave_majorant((xs, ys))
    tilde = eval_majorant(curve, xs)
    assert np.all(tilde >= ys - 1e-12)
    slopes = np.diff(curve.values) / np.diff(curve.s)
    assert np.all(np.diff(slopes) <= 1e-9)
    # Knots are samples, so the hull touches the data there.
    for s, v in curve.knots:
        assert v == pytest.approx(ys[np.searchsorted(xs, s)])


@given(st.tuples(*[st.floats(-2, 2)] * 4))
def test_pinch(coeffs):
    f = FunctionSpec.polynomial(coeffs)
    s, omega = sampled_modulus(f, UNIT, 257)
    tilde = eval_majorant(majorant_curve(f, UNIT, 257), s)
    assert np.all(tilde >= omega - 1e-12)
    assert np.all(tilde[1:] <= 2 * omega[1:] + 1e-12)


def test_bound_majorant_examples():
    const = FunctionSpec.polynomial([2.0])
    assert bound_majorant(const, 0.3, 1.0, Uniform()) == 0.0
    value = bound_majorant(HALF_SQUARE, 0.5, 1.0, Uniform())
    assert value == pytest.approx(2 * (1 / 8 - 1 / 128), abs=1e-6)
    assert value == pytest.approx(0.234375, abs=1e-6)
    assert value >= abs(core.functional_L(HALF_SQUARE, 0.5, 1.0, Uniform()))
    arcsine = Beta(0.5, 0.5)
    theta = 1 / (2 * math.pi)
    value = bound_majorant(HALF_SQUARE, 0.5, 0.0, arcsine)
    assert value == pytest.approx(2 * (theta - theta * theta / 2), abs=1e-6)
    assert value >= 0.0625
    with pytest.raises(ValueError):
        bound_majorant(HALF_SQUARE, 0.5, 1.5, Uniform())


def test_sampling_slack_covers_true_modulus():
    # omega(t^2; s) = 2s - s^2 exactly; grid points miss it by at most the slack.
    n = 33
    s = np.linspace(0.05, 1.0, 40)
    curve = majorant_curve(SQUARE, UNIT, n)
    gap = (2 * s - s * s) - eval_majorant(curve, s)
    assert np.all(gap >= -1e-12)
    assert np.all(2 * gap <= sampling_slack(SQUARE, UNIT, n) + 1e-12)


def test_bound_sup_norm_examples():
    assert bound_sup_norm(HALF_SQUARE, 0.5, 1.0, Uniform()) == pytest.approx(2.0)
    assert bound_sup_norm(FunctionSpec.polynomial([0.0]), 0.5, 1.0, Uniform()) == 0.0
    wave = FunctionSpec.sampled(lambda t: np.sin(10 * t), lambda t: 10 * np.cos(10 * t), UNIT)
    assert bound_sup_norm(wave, 0.5, 1.0, Uniform()) == pytest.approx(4.0, abs=1e-5)


def test_theta_is_half_kernel_l1():
    w = Beta(2.0, 3.0)
    for x in w.interval.grid(7):
        for c in (0.0, 0.5, 1.0):
            theta = 0.5 * ((c - 1) * abs(x - w.sigma) + 2 * core.nu(x, c, w))
            assert theta == pytest.approx(0.5 * core.kernel_l1(x, c, w), abs=1e-12)
