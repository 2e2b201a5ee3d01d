"""Weighted one-point quadrature functional and its derivative-based bounds.

For a weight ``w`` on ``[a, b]`` with mass ``m`` and mean ``sigma`` the
functional is

    L_{w,c}(f)(x) = f(x) - (1/m) int f w - c (f(b) - f(a)) / (b - a) (x - sigma).

It has the Peano representation ``L = int P(x, t) f'(t) dt``. The kernel
changes sign exactly once on the side of ``x`` away from ``sigma``, at the
crossing point ``t*``; the normalized moment ``nu`` of ``(t - x)`` between
``x`` and ``t*`` controls both the two-sided bounds and ``int |P|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .numerics import QuadConfig, RootConfig, find_root, integrate, poly_range
from .weights import Interval, Weight

__all__ = [
    "FunctionSpec",
    "BoundReport",
    "u_wc",
    "t_star",
    "nu",
    "kernel_P",
    "kernel_l1",
    "kernel_l1_quad",
    "kernel_integral",
    "functional_L",
    "bounds_derivative",
    "bound_l2",
    "sharpness_witness",
    "bound_report",
]

_PROBE_POINTS = 4096
_KERNEL_CFG = QuadConfig(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=4000)
_ROOT_CFG = RootConfig(x_tol=1e-14, f_tol=1e-15)


@dataclass(frozen=True, eq=False)
class FunctionSpec:
    """Evaluable scalar function on ``domain`` with optional derivative data.

    ``func`` and ``derivative`` must accept numpy arrays. ``derivative_range``
    is ``(gamma, Gamma)``, the infimum and supremum of ``f'``; when a
    derivative and a domain are both given it is checked on a 4096-point
    probe grid. ``coeffs`` (ascending) marks a polynomial, for which
    integrals are taken from cached moment tables instead of quadrature.
    """

    func: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    derivative_range: tuple[float, float] | None = None
    descriptor: str = ""
    domain: Interval | None = None
    coeffs: tuple[float, ...] | None = None
    breakpoints: tuple[float, ...] = ()
    range_is_exact: bool = True

    def __post_init__(self):
        if self.derivative_range is None:
            return
        gamma, Gamma = self.derivative_range
        if not gamma <= Gamma:
            raise ValueError(f"derivative range needs gamma <= Gamma, got ({gamma}, {Gamma})")
        if self.derivative is not None and self.domain is not None:
            probe = np.asarray(self.derivative(self.domain.grid(_PROBE_POINTS)), dtype=float)
            slack = 1e-9 * max(1.0, abs(gamma), abs(Gamma))
            if probe.min() < gamma - slack or probe.max() > Gamma + slack:
                raise ValueError(
                    f"derivative leaves the declared range ({gamma}, {Gamma}) on the probe grid: "
                    f"observed [{probe.min()}, {probe.max()}]"
                )

    def __call__(self, t):
        return self.func(t)

    def value(self, t: float) -> float:
        return float(np.asarray(self.func(np.array([float(t)])))[0])

    @property
    def sup_derivative(self) -> float:
        """||f'||_inf implied by the derivative range."""
        gamma, Gamma = self._require_range()
        return max(abs(gamma), abs(Gamma))

    def _require_range(self) -> tuple[float, float]:
        if self.derivative_range is None:
            raise ValueError(f"function {self.descriptor or self.func!r} has no derivative range")
        return self.derivative_range

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], interval: Interval | None = None) -> "FunctionSpec":
        """Polynomial with ascending coefficients and exact derivative range."""
        interval = interval or Interval(0.0, 1.0)
        coeffs = tuple(float(c) for c in coeffs) or (0.0,)
        deriv = tuple(np.polynomial.polynomial.polyder(np.array(coeffs))) or (0.0,)
        P = np.polynomial.polynomial.polyval
        return cls(
            func=lambda t: P(t, coeffs),
            derivative=lambda t: P(t, deriv) * np.ones_like(t, dtype=float),
            derivative_range=poly_range(deriv, interval.a, interval.b),
            descriptor="poly:" + ",".join(f"{c:g}" for c in coeffs),
            domain=interval,
            coeffs=coeffs,
        )

    @classmethod
    def sampled(
        cls,
        func: Callable,
        derivative: Callable,
        interval: Interval,
        descriptor: str = "",
        n: int = 1 << 16,
    ) -> "FunctionSpec":
        """Non-polynomial function; gamma and Gamma come from dense sampling and are flagged approximate."""
        values = np.asarray(derivative(interval.grid(n + 1)), dtype=float)
        return cls(
            func=func,
            derivative=derivative,
            derivative_range=(float(values.min()), float(values.max())),
            descriptor=descriptor,
            domain=interval,
            range_is_exact=False,
        )


@dataclass(frozen=True)
class BoundReport:
    x: float
    c: float
    L_value: float
    lower: float
    upper: float
    t_star: float
    nu: float
    kernel_l1: float
    majorant_bound: float | None = None
    l2_bound: float | None = None

    FIELDS = ("x", "c", "L_value", "lower", "upper", "t_star", "nu", "kernel_l1", "majorant_bound", "l2_bound")

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in self.FIELDS)


def _check_c(c: float) -> None:
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"weighted bounds need c in [0, 1], got c={c}; use the classical module for c in (1, 2]")


def _check_x(x: float, w: Weight) -> None:
    if not w.interval.contains(x):
        raise ValueError(f"x={x} outside [{w.interval.a}, {w.interval.b}]")


def u_wc(x: float, c: float, w: Weight) -> float:
    _check_c(c)
    _check_x(x, w)
    return c / w.interval.length * (x - w.sigma)


@lru_cache(maxsize=1 << 16)
def t_star(x: float, c: float, w: Weight, branch: str | None = None) -> float:
    """Crossing point of the kernel.

    For ``x <= sigma`` solves ``G(t*) = 1 + u`` on ``[x, b]``; otherwise
    ``G(t*) = u`` on ``[a, x]``. ``branch`` ("left" for the first case,
    "right" for the second) forces a branch; it exists so the two can be
    compared at ``x = sigma``.
    """
    u = u_wc(x, c, w)
    a, b = w.interval.a, w.interval.b
    if branch is None:
        branch = "left" if x <= w.sigma else "right"
    if branch == "left":
        if u >= 0.0:
            return b

        def level(t):
            return -u - w.tail_normalized(t)

        lo, hi = x, b
    elif branch == "right":
        if u <= 0.0:
            return a

        def level(t):
            return w.cdf_normalized(t) - u

        lo, hi = a, x
    else:
        raise ValueError(f"branch must be 'left' or 'right', got {branch!r}")
    # The level function changes sign on the bracket; rounding can put the root on an endpoint.
    if level(lo) >= 0.0:
        return lo
    if level(hi) <= 0.0:
        return hi
    return find_root(level, lo, hi, _ROOT_CFG)


@lru_cache(maxsize=1 << 16)
def nu(x: float, c: float, w: Weight, branch: str | None = None) -> float:
    """(1/m) int_x^{t*} (t - x) w(t) dt, nonnegative for either orientation."""
    ts = t_star(x, c, w, branch)
    lo, hi = (x, ts) if ts >= x else (ts, x)
    if lo == hi:
        return 0.0
    signed = (w.first_moment(lo, hi) - x * w.mass(lo, hi)) / w.total_mass
    value = signed if ts >= x else -signed
    # Clamp rounding-level negatives only.
    return max(value, 0.0) if value > -1e-13 else value


def kernel_P(x: float, t: float, c: float, w: Weight) -> float:
    u = u_wc(x, c, w)
    if t < x:
        return w.cdf_normalized(t) - u
    return -w.tail_normalized(t) - u


def _kernel_fn(x: float, c: float, w: Weight) -> Callable[[np.ndarray], np.ndarray]:
    u = u_wc(x, c, w)

    def P(ts):
        return np.array(
            [w.cdf_normalized(t) - u if t < x else -w.tail_normalized(t) - u for t in np.asarray(ts).ravel()]
        )

    return P


def _pieces(x: float, c: float, w: Weight, extra: Sequence[float] = ()) -> list[tuple[float, float]]:
    a, b = w.interval.a, w.interval.b
    cuts = sorted({a, b, x, *[p for p in extra if a < p < b]})
    return [(lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:]) if hi > lo]


def kernel_l1(x: float, c: float, w: Weight) -> float:
    """int_a^b |P(x, t)| dt = (c - 1)|x - sigma| + 2 nu."""
    return (c - 1.0) * abs(x - w.sigma) + 2.0 * nu(x, c, w)


def kernel_l1_quad(x: float, c: float, w: Weight) -> float:
    """Direct piecewise quadrature of |P|, split at x and t*."""
    P = _kernel_fn(x, c, w)
    return math.fsum(
        integrate(lambda t: np.abs(P(t)), lo, hi, _KERNEL_CFG)[0]
        for lo, hi in _pieces(x, c, w, [t_star(x, c, w)])
    )


@lru_cache(maxsize=1 << 14)
def _kernel_moments(x: float, c: float, w: Weight, degree: int) -> np.ndarray:
    P = _kernel_fn(x, c, w)
    pieces = _pieces(x, c, w)
    return np.array([
        math.fsum(integrate(lambda t, j=j: P(t) * t**j, lo, hi, _KERNEL_CFG)[0] for lo, hi in pieces)
        for j in range(degree + 1)
    ])


def kernel_integral(f: FunctionSpec, x: float, c: float, w: Weight) -> float:
    """int_a^b P(x, t) f'(t) dt by quadrature (moment table for polynomials)."""
    if f.coeffs is not None:
        deriv = np.polynomial.polynomial.polyder(np.array(f.coeffs))
        if deriv.size == 0:
            return 0.0
        return float(np.dot(deriv, _kernel_moments(x, c, w, deriv.size - 1)))
    if f.derivative is None:
        raise ValueError("kernel_integral needs a derivative")
    P = _kernel_fn(x, c, w)
    return math.fsum(
        integrate(lambda t: P(t) * f.derivative(t), lo, hi, _KERNEL_CFG)[0]
        for lo, hi in _pieces(x, c, w, f.breakpoints)
    )


def weighted_average(f: FunctionSpec, w: Weight) -> float:
    """(1/m) int f w over the whole interval."""
    if f.coeffs is not None:
        return float(np.dot(f.coeffs, w.raw_moments(len(f.coeffs) - 1)))
    return w.expectation(f.func, f.breakpoints)


def functional_L(f: FunctionSpec, x: float, c: float, w: Weight) -> float:
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    _check_x(x, w)
    a, b = w.interval.a, w.interval.b
    slope = (f.value(b) - f.value(a)) / (b - a)
    return f.value(x) - weighted_average(f, w) - c * slope * (x - w.sigma)


def bounds_derivative(f_range: tuple[float, float], x: float, c: float, w: Weight) -> tuple[float, float]:
    """Two-sided bounds on L_{w,c}(f)(x) from gamma <= f' <= Gamma.

    c = 1 gives |L_w| <= (Gamma - gamma) nu; c = 0 gives the improved
    weighted Ostrowski bounds.
    """
    gamma, Gamma = f_range
    if not gamma <= Gamma:
        raise ValueError(f"need gamma <= Gamma, got ({gamma}, {Gamma})")
    _check_c(c)
    drift = (1.0 - c) * (x - w.sigma)
    v = nu(x, c, w)
    return drift * gamma + (gamma - Gamma) * v, drift * Gamma + (Gamma - gamma) * v


@lru_cache(maxsize=1 << 14)
def _k_squared(x: float, w: Weight) -> float:
    a, b = w.interval.a, w.interval.b
    m = w.total_mass

    def left(ts):
        return np.array([(m * w.cdf_normalized(t)) ** 2 for t in np.asarray(ts).ravel()])

    def right(ts):
        return np.array([(m * w.tail_normalized(t)) ** 2 for t in np.asarray(ts).ravel()])

    return integrate(left, a, x, _KERNEL_CFG)[0] + integrate(right, x, b, _KERNEL_CFG)[0]


def bound_l2(f_range: tuple[float, float], x: float, w: Weight) -> float:
    """L2-type bound on |L_w(f)(x)| built from int K(x, t)^2 dt."""
    gamma, Gamma = f_range
    if not gamma <= Gamma:
        raise ValueError(f"need gamma <= Gamma, got ({gamma}, {Gamma})")
    _check_x(x, w)
    length = w.interval.length
    m = w.total_mass
    inner = _k_squared(x, w) - m * m * (x - w.sigma) ** 2 / length
    return 0.5 * (Gamma - gamma) * math.sqrt(length) / m * math.sqrt(max(inner, 0.0))


def sharpness_witness(w: Weight, gamma: float, Gamma: float) -> FunctionSpec:
    """Piecewise-affine function with slope Gamma on [a, sigma] and gamma after.

    At x = sigma and c = 1 it attains |L_w(f)| = (Gamma - gamma) nu.
    """
    if not gamma < Gamma:
        raise ValueError(f"witness needs gamma < Gamma, got ({gamma}, {Gamma})")
    a, sigma = w.interval.a, w.sigma
    peak = Gamma * (sigma - a)

    def func(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < sigma, Gamma * (t - a), peak + gamma * (t - sigma))

    def derivative(t):
        return np.where(np.asarray(t, dtype=float) < sigma, Gamma, gamma).astype(float)

    return FunctionSpec(
        func=func,
        derivative=derivative,
        derivative_range=(gamma, Gamma),
        descriptor=f"witness:{gamma:g},{Gamma:g}",
        domain=w.interval,
        breakpoints=(sigma,),
    )


def bound_report(
    f: FunctionSpec,
    x: float,
    c: float,
    w: Weight,
    *,
    majorant: bool = True,
    n_grid: int = 1025,
) -> BoundReport:
    from .majorant import bound_majorant

    f_range = f._require_range()
    lower, upper = bounds_derivative(f_range, x, c, w)
    return BoundReport(
        x=x,
        c=c,
        L_value=functional_L(f, x, c, w),
        lower=lower,
        upper=upper,
        t_star=t_star(x, c, w),
        nu=nu(x, c, w),
        kernel_l1=kernel_l1(x, c, w),
        majorant_bound=bound_majorant(f, x, c, w, n_grid) if majorant else None,
        l2_bound=bound_l2(f_range, x, w) if c == 1.0 else None,
    )
