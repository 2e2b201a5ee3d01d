"""Special functions: regularized incomplete beta and the normal CDF."""

from __future__ import annotations

import math

__all__ = [
    "log_beta",
    "betainc_cf",
    "betainc",
    "arcsine_cdf",
    "arcsine_partial_mean",
    "normal_pdf",
    "normal_cdf",
    "laplace_phi",
]

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXIT = 10_000


def log_beta(p: float, q: float) -> float:
    return math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q)


def _betacf(p: float, q: float, x: float) -> float:
    # Modified Lentz evaluation of the standard continued fraction.
    qab = p + q
    qap = p + 1.0
    qam = p - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXIT + 1):
        m2 = 2 * m
        aa = m * (q - m) * x / ((qam + m2) * (p + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (p={p}, q={q}, x={x})")


def betainc_cf(x: float, p: float, q: float) -> float:
    """Regularized incomplete beta I(x; p, q) by continued fraction.

    Uses the symmetry I(x; p, q) = 1 - I(1 - x; q, p) to stay on the side
    where the fraction converges quickly.
    """
    if p <= 0 or q <= 0:
        raise ValueError(f"beta parameters must be positive, got p={p}, q={q}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = p * math.log(x) + q * math.log1p(-x) - log_beta(p, q)
    if x < (p + 1.0) / (p + q + 2.0):
        return math.exp(log_front) * _betacf(p, q, x) / p
    return 1.0 - math.exp(log_front) * _betacf(q, p, 1.0 - x) / q


def arcsine_cdf(x: float) -> float:
    """I(x; 1/2, 1/2) = (2/pi) asin(sqrt(x))."""
    return 2.0 / math.pi * math.asin(math.sqrt(x))


def arcsine_partial_mean(x: float) -> float:
    """Integral of t over [0, x] against the arcsine density."""
    return (math.asin(math.sqrt(x)) - math.sqrt(x * (1.0 - x))) / math.pi


def betainc(x: float, p: float, q: float) -> float:
    """Regularized incomplete beta with closed forms for the arcsine family."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if p == 0.5 and q == 0.5:
        return arcsine_cdf(x)
    if p == 1.5 and q == 0.5:
        # Partial mean of the arcsine law divided by its mean 1/2.
        return 2.0 * arcsine_partial_mean(x)
    return betainc_cf(x, p, q)


_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def normal_pdf(t: float, mu: float = 0.0, s: float = 1.0) -> float:
    z = (t - mu) / s
    return _INV_SQRT_2PI / s * math.exp(-0.5 * z * z)


def normal_cdf(t: float, mu: float = 0.0, s: float = 1.0) -> float:
    return 0.5 * math.erfc(-(t - mu) / (s * math.sqrt(2.0)))


def laplace_phi(x: float) -> float:
    """Laplace's function Phi(x) - 1/2, computed without cancellation."""
    return 0.5 * math.erf(x / math.sqrt(2.0))
