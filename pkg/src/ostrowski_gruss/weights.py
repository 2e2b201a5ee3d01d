"""Weight functions on a closed interval and their partial moments.

Every weight exposes two routes to its masses and first moments: a closed
form (where one exists) and a generic adaptive-quadrature route through
:meth:`Weight.integrate`. The generic route is the verification oracle for
the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .numerics import NonConvergence, QuadConfig, integrate_singular
from .specfun import betainc, log_beta, normal_pdf

__all__ = [
    "Interval",
    "Weight",
    "Uniform",
    "Beta",
    "TruncatedNormal",
    "CustomWeight",
    "parse_weight",
]

_ORACLE_CFG = QuadConfig(abs_tol=1e-13, rel_tol=1e-13, max_subdivisions=4000)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, t: float) -> bool:
        return self.a <= t <= self.b

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.a, self.b, n)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"interval must look like 'a,b', got {text!r}")
        return cls(float(parts[0]), float(parts[1]))


_UNIT = Interval(0.0, 1.0)


class Weight:
    """Positive integrable weight on ``interval``.

    Concrete weights are frozen dataclasses carrying an ``interval`` field.
    They provide ``density_array`` and the singularity exponents used by the
    quadrature route; closed-form weights also override ``mass`` and
    ``first_moment``. Instances are immutable and safe to share.
    """

    interval: Interval

    def _finalize(self):
        mass = self._compute_total_mass()
        if not (math.isfinite(mass) and mass > 0):
            raise ValueError(f"weight has non-positive or infinite total mass {mass}")
        object.__setattr__(self, "_total_mass", mass)

    def _compute_total_mass(self) -> float:
        return self.mass(self.interval.a, self.interval.b)

    # -- generic quadrature route -------------------------------------------------

    def density_array(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def endpoint_exponents(self) -> tuple[float, float]:
        """Algebraic behaviour of the density at (a, b); negative means singular."""
        return 0.0, 0.0

    def integrate(
        self,
        g: Callable[[np.ndarray], np.ndarray],
        alpha: float,
        beta: float,
        cfg: QuadConfig | None = None,
    ) -> float:
        """Integral of ``g(t) * w(t)`` over ``[alpha, beta]`` by adaptive quadrature."""
        alpha, beta = self._check_range(alpha, beta)
        ea, eb = self.endpoint_exponents
        value, _ = integrate_singular(
            lambda t: g(t) * self.density_array(t),
            alpha,
            beta,
            self.interval.a,
            self.interval.b,
            ea,
            eb,
            cfg or _ORACLE_CFG,
        )
        return value

    def mass_quad(self, alpha: float, beta: float) -> float:
        return self.integrate(np.ones_like, alpha, beta)

    def first_moment_quad(self, alpha: float, beta: float) -> float:
        return self.integrate(lambda t: t, alpha, beta)

    # -- public surface -----------------------------------------------------------

    @property
    def total_mass(self) -> float:
        return self._total_mass

    def density(self, t: float) -> float:
        if not self.interval.contains(t):
            raise ValueError(f"t={t} outside [{self.interval.a}, {self.interval.b}]")
        with np.errstate(divide="ignore"):
            value = float(self.density_array(np.array([float(t)]))[0])
        if not math.isfinite(value):
            raise ValueError(f"density is unbounded at t={t}")
        return value

    def mass(self, alpha: float, beta: float) -> float:
        """m(alpha, beta), the integral of w over [alpha, beta]."""
        return self.mass_quad(alpha, beta)

    def first_moment(self, alpha: float, beta: float) -> float:
        """M(alpha, beta), the integral of t w(t) over [alpha, beta]."""
        return self.first_moment_quad(alpha, beta)

    def mean(self, alpha: float, beta: float) -> float:
        if not alpha < beta:
            raise ValueError(f"mean needs alpha < beta, got [{alpha}, {beta}]")
        return self.first_moment(alpha, beta) / self.mass(alpha, beta)

    @cached_property
    def sigma(self) -> float:
        """Weighted mean of the whole interval."""
        return self.mean(self.interval.a, self.interval.b)

    def cdf_normalized(self, t: float) -> float:
        """G(t) = m(a, t) / m(a, b)."""
        a, b = self.interval.a, self.interval.b
        if t <= a:
            return 0.0
        if t >= b:
            return 1.0
        return min(1.0, max(0.0, self.mass(a, t) / self.total_mass))

    def tail_normalized(self, t: float) -> float:
        """1 - G(t), computed as m(t, b) / m(a, b) to keep precision near b."""
        a, b = self.interval.a, self.interval.b
        if t <= a:
            return 1.0
        if t >= b:
            return 0.0
        return min(1.0, max(0.0, self.mass(t, b) / self.total_mass))

    def expectation(self, g: Callable[[np.ndarray], np.ndarray], breakpoints=()) -> float:
        """(1/m(a,b)) * integral of g w over [a, b], splitting at ``breakpoints``."""
        a, b = self.interval.a, self.interval.b
        cuts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
        total = math.fsum(self.integrate(g, lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:]))
        return total / self.total_mass

    def raw_moments(self, degree: int) -> np.ndarray:
        """Normalized moments E[t^j], j = 0..degree, by quadrature (cached)."""
        cache = self.__dict__.setdefault("_moment_cache", {})
        if degree not in cache:
            a, b = self.interval.a, self.interval.b
            cache[degree] = np.array(
                [self.integrate(lambda t, j=j: t**j, a, b) / self.total_mass for j in range(degree + 1)]
            )
        return cache[degree]

    def _check_range(self, alpha: float, beta: float) -> tuple[float, float]:
        a, b = self.interval.a, self.interval.b
        slack = 1e-12 * (b - a)
        if not (a - slack <= alpha <= beta + slack and beta <= b + slack):
            raise ValueError(f"need a <= alpha <= beta <= b, got alpha={alpha}, beta={beta} on [{a}, {b}]")
        alpha = min(max(alpha, a), b)
        beta = min(max(beta, alpha), b)
        return alpha, beta

    def describe(self) -> str:
        return type(self).__name__.lower()


@dataclass(frozen=True)
class Uniform(Weight):
    """Constant density 1 on the interval; m(alpha, beta) = beta - alpha."""

    interval: Interval = field(default_factory=lambda: Interval(0.0, 1.0))

    def __post_init__(self):
        self._finalize()

    def density_array(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def mass(self, alpha, beta):
        alpha, beta = self._check_range(alpha, beta)
        return beta - alpha

    def first_moment(self, alpha, beta):
        alpha, beta = self._check_range(alpha, beta)
        return 0.5 * (beta - alpha) * (beta + alpha)

    def describe(self):
        return "uniform"


@dataclass(frozen=True)
class Beta(Weight):
    """Beta(p, q) probability density on [0, 1].

    The quadrature route runs in the variable theta with t = sin(theta)**2,
    under which t**(p-1) (1-t)**(q-1) dt becomes
    2 sin(theta)**(2p-1) cos(theta)**(2q-1) dtheta; for p = q = 1/2 the
    integrand is then constant.
    """

    p: float = 0.5
    q: float = 0.5

    @property
    def interval(self) -> Interval:
        return _UNIT

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError(f"Beta needs p, q > 0, got p={self.p}, q={self.q}")
        object.__setattr__(self, "_log_norm", log_beta(self.p, self.q))
        self._finalize()

    def density_array(self, t):
        t = np.asarray(t, dtype=float)
        return t ** (self.p - 1.0) * (1.0 - t) ** (self.q - 1.0) * math.exp(-self._log_norm)

    @property
    def endpoint_exponents(self):
        return self.p - 1.0, self.q - 1.0

    def integrate(self, g, alpha, beta, cfg=None):
        alpha, beta = self._check_range(alpha, beta)
        th_lo = math.asin(math.sqrt(alpha))
        th_hi = math.asin(math.sqrt(beta))
        ep, eq = 2.0 * self.p - 1.0, 2.0 * self.q - 1.0
        scale = 2.0 * math.exp(-self._log_norm)

        def h(theta):
            s = np.sin(theta)
            return g(s * s) * (scale * s**ep * np.cos(theta) ** eq)

        value, _ = integrate_singular(
            h, th_lo, th_hi, 0.0, 0.5 * math.pi, ep, eq, cfg or _ORACLE_CFG
        )
        return value

    def _compute_total_mass(self):
        return 1.0

    def mass(self, alpha, beta):
        alpha, beta = self._check_range(alpha, beta)
        if alpha == beta:
            return 0.0
        if alpha > 0.5:
            # Upper tails keep absolute precision near t = 1.
            return betainc(1.0 - alpha, self.q, self.p) - betainc(1.0 - beta, self.q, self.p)
        return betainc(beta, self.p, self.q) - betainc(alpha, self.p, self.q)

    def first_moment(self, alpha, beta):
        # t * w_{p,q}(t) = p/(p+q) * w_{p+1,q}(t)
        alpha, beta = self._check_range(alpha, beta)
        if alpha == beta:
            return 0.0
        scale = self.p / (self.p + self.q)
        p1 = self.p + 1.0
        if alpha > 0.5:
            return scale * (betainc(1.0 - alpha, self.q, p1) - betainc(1.0 - beta, self.q, p1))
        return scale * (betainc(beta, p1, self.q) - betainc(alpha, p1, self.q))

    @cached_property
    def sigma(self):
        return self.p / (self.p + self.q)

    def describe(self):
        return f"beta:{self.p:g},{self.q:g}"


@dataclass(frozen=True)
class TruncatedNormal(Weight):
    """Normal density N(mu, s^2) restricted to the interval, not renormalized."""

    mu: float = 0.0
    s: float = 1.0
    interval: Interval = field(default_factory=lambda: Interval(0.0, 1.0))

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"normal scale must be positive, got {self.s}")
        self._finalize()

    def density_array(self, t):
        z = (np.asarray(t, dtype=float) - self.mu) / self.s
        return np.exp(-0.5 * z * z) / (self.s * math.sqrt(2.0 * math.pi))

    def _std(self, t: float) -> float:
        return (t - self.mu) / (self.s * math.sqrt(2.0))

    def mass(self, alpha, beta):
        alpha, beta = self._check_range(alpha, beta)
        if alpha >= self.mu:
            return 0.5 * (math.erfc(self._std(alpha)) - math.erfc(self._std(beta)))
        if beta <= self.mu:
            return 0.5 * (math.erfc(-self._std(beta)) - math.erfc(-self._std(alpha)))
        return 0.5 * (math.erf(self._std(beta)) - math.erf(self._std(alpha)))

    def first_moment(self, alpha, beta):
        # M = mu * m + s^2 (w(alpha) - w(beta))
        alpha, beta = self._check_range(alpha, beta)
        pdf_gap = normal_pdf(alpha, self.mu, self.s) - normal_pdf(beta, self.mu, self.s)
        return self.mu * self.mass(alpha, beta) + self.s**2 * pdf_gap

    def describe(self):
        return f"normal:{self.mu:g},{self.s:g}"


@dataclass(frozen=True, eq=False)
class CustomWeight(Weight):
    """User-supplied density handle.

    ``density_fn`` must accept numpy arrays. ``left_exponent`` and
    ``right_exponent`` declare algebraic endpoint behaviour
    ``(t-a)**e`` / ``(b-t)**e``; both must exceed -1.
    """

    density_fn: Callable[[np.ndarray], np.ndarray]
    interval: Interval = field(default_factory=lambda: Interval(0.0, 1.0))
    left_exponent: float = 0.0
    right_exponent: float = 0.0

    def __post_init__(self):
        if self.left_exponent <= -1 or self.right_exponent <= -1:
            raise ValueError("endpoint singularity exponents must exceed -1 for integrability")
        probe = self.interval.grid(257)[1:-1]
        values = np.asarray(self.density_fn(probe), dtype=float)
        if not np.all(values > 0):
            raise ValueError("custom density must be strictly positive inside the interval")
        try:
            self._finalize()
        except NonConvergence as exc:
            raise ValueError(f"custom density does not look integrable: {exc}") from exc

    def density_array(self, t):
        return np.asarray(self.density_fn(np.asarray(t, dtype=float)), dtype=float)

    @property
    def endpoint_exponents(self):
        return self.left_exponent, self.right_exponent

    def describe(self):
        return "custom"


def parse_weight(text: str, interval: Interval | None = None) -> Weight:
    """Parse ``uniform``, ``beta:<p>,<q>`` or ``normal:<mu>,<s>``.

    Beta weights always live on [0, 1]; the interval argument is ignored
    for them.
    """
    interval = interval or Interval(0.0, 1.0)
    kind, _, args = text.strip().partition(":")
    kind = kind.lower()
    values = [float(v) for v in args.split(",")] if args else []
    if kind == "uniform" and not values:
        return Uniform(interval)
    if kind == "beta" and len(values) == 2:
        return Beta(values[0], values[1])
    if kind == "normal" and len(values) == 2:
        return TruncatedNormal(values[0], values[1], interval)
    raise ValueError(f"unrecognised weight {text!r}; expected uniform, beta:p,q or normal:mu,s")
