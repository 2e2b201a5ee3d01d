"""Unweighted Ostrowski-Grüss functionals and their closed-form bounds.

Everything here is closed form in (x, c, gamma, Gamma), with no quadrature
beyond the average of f itself, which makes the module an independent
cross-check of the weighted machinery at the uniform weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FunctionSpec
from .numerics import QuadConfig, integrate
from .weights import Interval

__all__ = [
    "ClassicalReport",
    "functional_Lc",
    "bounds_e33",
    "anastassiou_bound",
    "cheng_bound",
    "matic_bound",
    "dragomir_wang_bound",
    "classical_report",
]

_CFG = QuadConfig(abs_tol=1e-13, rel_tol=1e-13)


@dataclass(frozen=True)
class ClassicalReport:
    x: float
    c: float
    L_value: float
    e33_lower: float
    e33_upper: float
    cheng: float
    matic: float
    dragomir_wang: float
    anastassiou: float

    FIELDS = ("x", "c", "L_value", "e33_lower", "e33_upper", "cheng", "matic", "dragomir_wang", "anastassiou")

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in self.FIELDS)


def _average(f: FunctionSpec, interval: Interval) -> float:
    a, b = interval.a, interval.b
    if f.coeffs is not None:
        antider = np.polynomial.polynomial.polyint(np.array(f.coeffs))
        P = np.polynomial.polynomial.polyval
        return float(P(b, antider) - P(a, antider)) / (b - a)
    cuts = [a] + sorted(p for p in f.breakpoints if a < p < b) + [b]
    total = math.fsum(integrate(f.func, lo, hi, _CFG)[0] for lo, hi in zip(cuts[:-1], cuts[1:]))
    return total / (b - a)


def functional_Lc(f: FunctionSpec, x: float, c: float, interval: Interval) -> float:
    """f(x) - mean of f - c (f(b) - f(a))/(b - a) (x - (a + b)/2)."""
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    if not interval.contains(x):
        raise ValueError(f"x={x} outside [{interval.a}, {interval.b}]")
    a, b = interval.a, interval.b
    slope = (f.value(b) - f.value(a)) / (b - a)
    return f.value(x) - _average(f, interval) - c * slope * (x - 0.5 * (a + b))


def bounds_e33(f_range: tuple[float, float], x: float, c: float, interval: Interval) -> tuple[float, float]:
    """Quadratic two-sided bounds on L_c(f)(x) valid for c in [0, 2]."""
    gamma, Gamma = f_range
    if not 0.0 <= c <= 2.0:
        raise ValueError(f"c must lie in [0, 2], got {c}")
    if not gamma <= Gamma:
        raise ValueError(f"need gamma <= Gamma, got ({gamma}, {Gamma})")
    a, b = interval.a, interval.b
    u = c * (x - 0.5 * (a + b))
    left_sq = (x - a - u) ** 2
    right_sq = (x - b - u) ** 2
    denom = 2.0 * (b - a)
    return (left_sq * gamma - right_sq * Gamma) / denom, (left_sq * Gamma - right_sq * gamma) / denom


def anastassiou_bound(x: float, interval: Interval) -> float:
    """((x-a)^2 + (b-x)^2) / (2(b-a)); multiply by ||f'||_inf for the bound."""
    if not interval.contains(x):
        raise ValueError(f"x={x} outside [{interval.a}, {interval.b}]")
    a, b = interval.a, interval.b
    return ((x - a) ** 2 + (b - x) ** 2) / (2.0 * (b - a))


def cheng_bound(f_range, interval: Interval) -> float:
    return (interval.length) * (f_range[1] - f_range[0]) / 8.0


def matic_bound(f_range, interval: Interval) -> float:
    return (interval.length) * (f_range[1] - f_range[0]) / (4.0 * math.sqrt(3.0))


def dragomir_wang_bound(f_range, interval: Interval) -> float:
    return (interval.length) * (f_range[1] - f_range[0]) / 4.0


def classical_report(f: FunctionSpec, x: float, c: float, interval: Interval) -> ClassicalReport:
    f_range = f._require_range()
    lower, upper = bounds_e33(f_range, x, c, interval)
    return ClassicalReport(
        x=x,
        c=c,
        L_value=functional_Lc(f, x, c, interval),
        e33_lower=lower,
        e33_upper=upper,
        cheng=cheng_bound(f_range, interval),
        matic=matic_bound(f_range, interval),
        dragomir_wang=dragomir_wang_bound(f_range, interval),
        anastassiou=anastassiou_bound(x, interval) * f.sup_derivative,
    )
