"""Modulus of continuity, its least concave majorant, and the bounds built on them.

The modulus is sampled on a uniform grid, so it is a lower estimate of the
true ``omega(f; s)``. For ``|f'| <= L`` and grid step ``h`` the true
majorant exceeds the sampled one by at most ``2 h L``; see
:func:`sampling_slack`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import FunctionSpec, _check_c, kernel_l1
from .weights import Interval, Weight

__all__ = [
    "MajorantCurve",
    "modulus",
    "sampled_modulus",
    "least_concave_majorant",
    "eval_majorant",
    "majorant_curve",
    "bound_majorant",
    "bound_sup_norm",
    "sampling_slack",
]

DEFAULT_GRID = 1025
_SUP_PROBE = 4097


@dataclass(frozen=True, eq=False)
class MajorantCurve:
    """Concave, nondecreasing, piecewise-linear curve through ``(s[i], values[i])``."""

    s: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        v = np.array(self.values, dtype=float)
        if s.ndim != 1 or s.shape != v.shape or s.size == 0:
            raise ValueError("majorant knots must be two equal-length 1-d sequences")
        if s[0] != 0.0 or v[0] != 0.0:
            raise ValueError("majorant must start at (0, 0)")
        if np.any(np.diff(s) <= 0):
            raise ValueError("knot abscissae must be strictly increasing")
        scale = max(1.0, float(np.abs(v).max()))
        if np.any(np.diff(v) < -1e-12 * scale):
            raise ValueError("majorant must be nondecreasing")
        if s.size > 2:
            slopes = np.diff(v) / np.diff(s)
            if np.any(np.diff(slopes) > 1e-9 * max(1.0, float(np.abs(slopes).max()))):
                raise ValueError("majorant must be concave")
        s.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", v)

    @property
    def knots(self) -> list[tuple[float, float]]:
        return list(zip(self.s.tolist(), self.values.tolist()))

    def __call__(self, t):
        return eval_majorant(self, t)


def _diagonal_maxima(values: np.ndarray, k_max: int) -> np.ndarray:
    out = np.zeros(k_max + 1)
    buf = np.empty(values.size)
    for k in range(1, k_max + 1):
        diff = np.subtract(values[k:], values[:-k], out=buf[: values.size - k])
        out[k] = max(diff.max(), -diff.min())
    return np.maximum.accumulate(out)


def _grid_values(f: FunctionSpec, interval: Interval, n_grid: int) -> np.ndarray:
    if n_grid < 2:
        raise ValueError(f"n_grid must be >= 2, got {n_grid}")
    return np.asarray(f(interval.grid(n_grid)), dtype=float)


def modulus(f: FunctionSpec, interval: Interval, n_grid: int, s: float) -> float:
    """max |f(u) - f(v)| over grid pairs with |u - v| <= s."""
    if not 0.0 <= s <= interval.length * (1 + 1e-12):
        raise ValueError(f"s={s} outside [0, {interval.length}]")
    values = _grid_values(f, interval, n_grid)
    h = interval.length / (n_grid - 1)
    k = min(n_grid - 1, int(math.floor(s / h * (1 + 1e-12))))
    return float(_diagonal_maxima(values, k)[-1]) if k > 0 else 0.0


@lru_cache(maxsize=256)
def sampled_modulus(f: FunctionSpec, interval: Interval, n_grid: int = DEFAULT_GRID) -> tuple[np.ndarray, np.ndarray]:
    """Grid modulus at every lag: returns ``(s_k, omega_k)`` for k = 0..n_grid-1 (read-only)."""
    values = _grid_values(f, interval, n_grid)
    s = np.linspace(0.0, interval.length, n_grid)
    omega = _diagonal_maxima(values, n_grid - 1)
    s.flags.writeable = False
    omega.flags.writeable = False
    return s, omega


def least_concave_majorant(samples: Sequence[tuple[float, float]] | tuple[np.ndarray, np.ndarray]) -> MajorantCurve:
    """Upper concave hull of nondecreasing samples starting at (0, 0).

    Monotone chain: scan left to right and drop the last hull point while
    it lies on or below the chord from its predecessor to the new point.
    """
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        xs, ys = (np.asarray(samples[0], dtype=float), np.asarray(samples[1], dtype=float))
    else:
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("samples must be a sequence of (s, value) pairs")
        xs, ys = arr[:, 0], arr[:, 1]
    if xs.size == 0 or xs[0] != 0.0 or ys[0] != 0.0:
        raise ValueError("samples must start at (0, 0)")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    if np.any(np.diff(ys) < 0):
        raise ValueError("sample values must be nondecreasing")

    hull: list[int] = []
    for i in range(xs.size):
        while len(hull) >= 2:
            o, m = hull[-2], hull[-1]
            cross = (xs[m] - xs[o]) * (ys[i] - ys[o]) - (ys[m] - ys[o]) * (xs[i] - xs[o])
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return MajorantCurve(xs[hull], ys[hull])


def eval_majorant(curve: MajorantCurve, t):
    """Linear interpolation between bracketing knots."""
    t_arr = np.asarray(t, dtype=float)
    end = curve.s[-1]
    if np.any(t_arr < 0.0) or np.any(t_arr > end * (1 + 1e-12)):
        raise ValueError(f"t={t} outside [0, {end}]")
    out = np.interp(np.minimum(t_arr, end), curve.s, curve.values)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=256)
def majorant_curve(f: FunctionSpec, interval: Interval, n_grid: int = DEFAULT_GRID) -> MajorantCurve:
    return least_concave_majorant(sampled_modulus(f, interval, n_grid))


def sampling_slack(f: FunctionSpec, interval: Interval, n_grid: int = DEFAULT_GRID) -> float:
    """Upper bound on 2 * (true majorant - sampled majorant) at any s > 0.

    Rounding an extremal pair inward to the grid loses at most ``2 h ||f'||``.
    """
    h = interval.length / (n_grid - 1)
    return 4.0 * h * f.sup_derivative


def bound_majorant(
    f: FunctionSpec,
    x: float,
    c: float,
    w: Weight,
    n_grid: int = DEFAULT_GRID,
    refine_tol: float = 1e-3,
    max_grid: int = 1 << 20,
) -> float:
    """2 * omega~(f; kernel_l1 / 2).

    The grid is doubled until the majorant at the argument moves by less
    than ``refine_tol``; the finest value is returned.
    """
    _check_c(c)
    theta = 0.5 * kernel_l1(x, c, w)
    if theta <= 0.0:
        return 0.0
    interval = w.interval
    theta = min(theta, interval.length)
    n = n_grid
    value = eval_majorant(majorant_curve(f, interval, n), theta)
    while True:
        finer = 2 * n - 1
        if finer > max_grid:
            warnings.warn(f"majorant refinement stopped at {n} points without meeting {refine_tol}")
            return 2.0 * value
        refined = eval_majorant(majorant_curve(f, interval, finer), theta)
        if abs(refined - value) < refine_tol:
            return 2.0 * refined
        n, value = finer, refined


def bound_sup_norm(f: FunctionSpec, x: float, c: float, w: Weight) -> float:
    """4 ||f||_inf, with the norm taken on a dense probe grid."""
    _check_c(c)
    probe = np.asarray(f(w.interval.grid(_SUP_PROBE)), dtype=float)
    return 4.0 * float(np.max(np.abs(probe)))
