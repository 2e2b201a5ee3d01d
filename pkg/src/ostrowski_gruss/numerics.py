"""Adaptive Gauss-Kronrod quadrature and a bracketing root finder.

Both routines are deterministic: subdivision order and iterate sequences
depend only on the inputs, never on timing or global state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadConfig",
    "RootConfig",
    "NonConvergence",
    "NoBracket",
    "integrate",
    "integrate_singular",
    "find_root",
    "poly_range",
    "poly_sup_norm",
]

_EPS = np.finfo(float).eps

# Kronrod abscissae on [-1, 1] (positive half, descending) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for the 7-point rule; its nodes are _XGK[1], _XGK[3], _XGK[5], _XGK[7].
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class RootConfig:
    x_tol: float = 1e-12
    f_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (self.x_tol > 0 and self.f_tol > 0):
            raise ValueError("root-finder tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


class NonConvergence(ArithmeticError):
    """Adaptive quadrature hit its subdivision limit.

    Carries the best value found and its error estimate so callers can
    decide whether the result is still usable.
    """

    def __init__(self, value: float, err_estimate: float, message: str | None = None):
        self.value = value
        self.err_estimate = err_estimate
        super().__init__(
            message
            or f"quadrature did not converge: value={value!r}, error estimate={err_estimate:.3e}"
        )


class NoBracket(ValueError):
    """The root finder was given an interval without a sign change."""


def _gk15(f, lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    fx = np.asarray(f(center + half * _NODES), dtype=float)
    if fx.shape != (15,):
        fx = np.broadcast_to(fx, (15,))
    kronrod = half * float(np.dot(_KRONROD_W, fx))
    gauss = half * float(np.dot(_GAUSS_W, fx))
    err = abs(kronrod - gauss)
    # Panels whose two rules agree to rounding are treated as exact.
    floor = 50.0 * _EPS * half * float(np.dot(_KRONROD_W, np.abs(fx)))
    if err < floor:
        err = 0.0
    return kronrod, err


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    alpha: float,
    beta: float,
    cfg: QuadConfig | None = None,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[alpha, beta]`` by globally adaptive GK 7/15.

    ``f`` must accept a numpy array of abscissae and return an array of the
    same shape. The panel with the largest error estimate is bisected until
    the summed estimate drops below ``max(abs_tol, rel_tol * |value|)``.

    Returns:
        ``(value, err_estimate)``.

    Raises:
        NonConvergence: when ``cfg.max_subdivisions`` panels are not enough.
    """
    cfg = cfg or QuadConfig()
    if alpha > beta:
        raise ValueError(f"integrate expects alpha <= beta, got [{alpha}, {beta}]")
    if alpha == beta:
        return 0.0, 0.0

    value, err = _gk15(f, alpha, beta)
    heap = [(-err, 0, alpha, beta, value, err)]
    total, total_err = value, err
    counter = 1
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        if counter >= cfg.max_subdivisions:
            raise NonConvergence(total, total_err)
        _, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            # Panel cannot be split further in floating point.
            raise NonConvergence(total, total_err)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2))
        counter += 2
        total += v1 + v2 - v
        total_err += e1 + e2 - e
    # Re-sum from the panels to shed the drift of incremental updates.
    panels = sorted(heap, key=lambda item: item[2])
    total = math.fsum(item[4] for item in panels)
    total_err = math.fsum(item[5] for item in panels)
    return total, total_err


def _power_exponent(singularity: float) -> float:
    if singularity <= -1.0:
        raise ValueError(f"singularity exponent {singularity} is not integrable")
    return max(1.0, 1.0 / (1.0 + singularity))


def integrate_singular(
    f: Callable[[np.ndarray], np.ndarray],
    alpha: float,
    beta: float,
    left_anchor: float,
    right_anchor: float,
    left_exponent: float = 0.0,
    right_exponent: float = 0.0,
    cfg: QuadConfig | None = None,
) -> tuple[float, float]:
    """Integrate ``f`` with algebraic endpoint singularities removed.

    ``f`` may behave like ``(t - left_anchor)**left_exponent`` near the left
    anchor and ``(right_anchor - t)**right_exponent`` near the right one.
    The half of ``[alpha, beta]`` nearer each anchor is integrated under the
    power substitution ``t = anchor +/- u**k`` with ``k = 1/(1 + exponent)``,
    which flattens the singular factor. Exponents >= 0 need no substitution.
    """
    if alpha > beta:
        raise ValueError(f"integrate_singular expects alpha <= beta, got [{alpha}, {beta}]")
    if alpha == beta:
        return 0.0, 0.0
    kl = _power_exponent(left_exponent)
    kr = _power_exponent(right_exponent)
    if kl == 1.0 and kr == 1.0:
        return integrate(f, alpha, beta, cfg)

    mid = 0.5 * (alpha + beta)
    if kl == 1.0:
        left = integrate(f, alpha, mid, cfg)
    else:
        def g_left(u):
            return f(left_anchor + u**kl) * (kl * u ** (kl - 1.0))

        left = integrate(
            g_left,
            max(alpha - left_anchor, 0.0) ** (1.0 / kl),
            (mid - left_anchor) ** (1.0 / kl),
            cfg,
        )
    if kr == 1.0:
        right = integrate(f, mid, beta, cfg)
    else:
        def g_right(u):
            return f(right_anchor - u**kr) * (kr * u ** (kr - 1.0))

        right = integrate(
            g_right,
            max(right_anchor - beta, 0.0) ** (1.0 / kr),
            (right_anchor - mid) ** (1.0 / kr),
            cfg,
        )
    return left[0] + right[0], left[1] + right[1]


def find_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: RootConfig | None = None,
) -> float:
    """Brent's method on a bracketing interval.

    Combines bisection with secant and inverse quadratic steps. Stops when
    ``|g(t)| <= f_tol`` or the bracket is narrower than ``x_tol``.

    Raises:
        NoBracket: if ``g(lo)`` and ``g(hi)`` share a strict sign.
        ArithmeticError: if ``max_iter`` iterations do not converge.
    """
    cfg = cfg or RootConfig()
    a, b = float(lo), float(hi)
    fa, fb = g(a), g(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoBracket(f"no sign change on [{lo}, {hi}]: g(lo)={fa!r}, g(hi)={fb!r}")

    c, fc = a, fa
    d = e = b - a
    for _ in range(cfg.max_iter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + 0.5 * cfg.x_tol
        m = 0.5 * (c - b)
        if abs(m) <= tol or abs(fb) <= cfg.f_tol:
            return b
        if abs(e) >= tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                qq = fa / fc
                r = fb / fc
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0))
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else math.copysign(tol, m)
        fb = g(b)
    raise ArithmeticError(f"find_root did not converge in {cfg.max_iter} iterations")


def poly_range(coeffs, lo: float, hi: float) -> tuple[float, float]:
    """Exact (min, max) of a polynomial with ascending ``coeffs`` on [lo, hi].

    Candidates are the endpoints and the real critical points inside the
    interval: closed form when the derivative is linear, companion-matrix
    roots beyond that.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if coeffs.size == 0:
        return 0.0, 0.0
    deriv = np.polynomial.polynomial.polyder(coeffs)
    # Leading terms far below rounding level wreck the companion matrix.
    scale = max(1.0, abs(lo), abs(hi))
    if deriv.size:
        mags = np.abs(deriv) * scale ** np.arange(deriv.size)
        keep = np.nonzero(mags > 1e-15 * mags.max())[0] if mags.max() > 0 else []
        deriv = deriv[: keep[-1] + 1] if len(keep) else deriv[:1]
    candidates = [lo, hi]
    if deriv.size == 2 and deriv[1] != 0.0:
        candidates.append(-deriv[0] / deriv[1])
    elif deriv.size > 2:
        roots = np.polynomial.polynomial.polyroots(deriv)
        candidates.extend(r.real for r in roots if abs(r.imag) <= 1e-12 * scale)
    pts = np.array([t for t in candidates if lo <= t <= hi])
    values = np.polynomial.polynomial.polyval(pts, coeffs)
    return float(values.min()), float(values.max())


def poly_sup_norm(coeffs, lo: float, hi: float) -> float:
    low, high = poly_range(coeffs, lo, hi)
    return max(abs(low), abs(high))
