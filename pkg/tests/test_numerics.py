from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ostrowski_gruss.numerics import (
    NoBracket,
    NonConvergence,
    QuadConfig,
    RootConfig,
    find_root,
    integrate,
    integrate_singular,
    poly_range,
    poly_sup_norm,
)
from ostrowski_gruss.specfun import arcsine_cdf, normal_cdf

P = np.polynomial.polynomial


def test_identity_integral():
    value, err = integrate(lambda t: t, 0.0, 1.0)
    assert value == pytest.approx(0.5, abs=1e-15)
    assert err >= 0.0


def test_normal_density_integral():
    value, _ = integrate(lambda t: np.exp(-0.5 * t * t) / math.sqrt(2 * math.pi), 0.0, 1.0)
    assert value == pytest.approx(0.5 * math.erf(1 / math.sqrt(2)), abs=1e-12)
    assert value == pytest.approx(0.3413447, abs=5e-8)


def test_arcsine_first_moment_with_substitution():
    def w(t):
        return t / (math.pi * np.sqrt(t * (1 - t)))

    value, _ = integrate_singular(w, 0.0, 1.0, 0.0, 1.0, -0.5, -0.5)
    assert value == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("degree", range(11))
def test_polynomials_exact(degree):
    rng = np.random.default_rng(degree)
    coeffs = rng.normal(size=degree + 1)
    lo, hi = -0.7, 1.9
    exact = P.polyval(hi, P.polyint(coeffs)) - P.polyval(lo, P.polyint(coeffs))
    value, _ = integrate(lambda t: P.polyval(t, coeffs), lo, hi)
    assert value == pytest.approx(exact, abs=1e-12 * max(1.0, abs(exact)))


@given(
    st.floats(-3, 3),
    st.floats(0.01, 3),
    st.floats(0.05, 0.95),
)
def test_additivity(lo, width, frac):
    hi = lo + width
    mid = lo + frac * width

    def f(t):
        return np.sin(3 * t) + t**2

    whole = integrate(f, lo, hi)[0]
    parts = integrate(f, lo, mid)[0] + integrate(f, mid, hi)[0]
    assert whole == pytest.approx(parts, abs=1e-10)


def test_singular_endpoint():
    value, _ = integrate_singular(lambda t: t**-0.9, 0.0, 1.0, 0.0, 1.0, -0.9, 0.0)
    assert value == pytest.approx(10.0, rel=1e-10)
    beta = math.exp(math.lgamma(0.3) + math.lgamma(0.5) - math.lgamma(0.8))
    value, _ = integrate_singular(
        lambda t: t**-0.7 * (1 - t) ** -0.5, 0.0, 1.0, 0.0, 1.0, -0.7, -0.5
    )
    assert value == pytest.approx(beta, rel=1e-10)


def test_bad_ranges():
    with pytest.raises(ValueError):
        integrate(lambda t: t, 1.0, 0.0)
    assert integrate(lambda t: t, 0.5, 0.5) == (0.0, 0.0)
    with pytest.raises(ValueError):
        integrate_singular(lambda t: t, 0.0, 1.0, 0.0, 1.0, -1.0, 0.0)


def test_nonconvergence_carries_estimate():
    cfg = QuadConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=5)
    with pytest.raises(NonConvergence) as info:
        integrate(lambda t: np.abs(t - 0.3) ** -0.5, 0.0, 1.0, cfg)
    assert math.isfinite(info.value.value)
    assert info.value.err_estimate > 0


def test_config_validation():
    with pytest.raises(ValueError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadConfig(max_subdivisions=0)
    with pytest.raises(ValueError):
        RootConfig(x_tol=-1.0)


def test_root_examples():
    assert find_root(lambda t: t - 0.75, 0.0, 1.0) == pytest.approx(0.75, abs=1e-12)
    target = math.sin(0.45 * math.pi) ** 2
    assert find_root(lambda t: arcsine_cdf(t) - 0.9, 0.0, 1.0) == pytest.approx(target, abs=1e-11)
    assert find_root(lambda t: normal_cdf(t) - 0.5, -1.0, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_no_bracket():
    with pytest.raises(NoBracket):
        find_root(lambda t: t * t + 1.0, -1.0, 1.0)


@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(0, 2))
def test_root_lies_in_bracket(root, scale, curvature):
    def g(t):
        return scale * (t - root) + curvature * (t - root) ** 3

    lo, hi = root - 1.3, root + 0.7
    cfg = RootConfig(x_tol=1e-12, f_tol=1e-300)
    t = find_root(g, lo, hi, cfg)
    assert lo <= t <= hi
    assert abs(t - root) <= 1e-10


def test_poly_range_examples():
    assert poly_range([0.0, 0.0, 3.0], -1.0, 1.0) == pytest.approx((0.0, 3.0))
    assert poly_range([1.0, 0.0], 0.0, 1.0) == (1.0, 1.0)
    assert poly_sup_norm([0.0, 0.0, -2.0], 0.0, 1.0) == pytest.approx(2.0)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=7), st.floats(-2, 1), st.floats(0.1, 3))
def test_poly_range_vs_sampling(coeffs, lo, width):
    hi = lo + width
    low, high = poly_range(coeffs, lo, hi)
    ts = np.linspace(lo, hi, 20001)
    vals = P.polyval(ts, coeffs)
    scale = 1e-9 * max(1.0, np.abs(vals).max())
    assert low <= vals.min() + scale and high >= vals.max() - scale
    # The exact range cannot be far outside the sampled one.
    assert_allclose([low, high], [vals.min(), vals.max()], atol=1e-3 * max(1.0, np.abs(vals).max()))
