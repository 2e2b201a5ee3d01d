"""Closed forms for the Beta and normal weights, the random battery, and Table 1.

The battery draws random cubics (exact gamma, Gamma) and checks every
inequality the library implements against values obtained along an
independent route. Failures are counted, never raised.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import classical, core, majorant
from .core import FunctionSpec
from .numerics import poly_sup_norm
from .specfun import betainc, laplace_phi, normal_cdf
from .weights import Beta, Interval, TruncatedNormal, Uniform, Weight

__all__ = [
    "Table1Row",
    "ErratumFinding",
    "CheckResult",
    "BatterySummary",
    "beta_nu_closed",
    "beta_nu_table_convention",
    "normal_nu_closed",
    "standard_normal_mean_closed",
    "standard_normal_nu_closed",
    "random_function",
    "battery_weights",
    "run_battery",
    "table1",
    "erratum_report",
    "PUBLISHED_TABLE",
    "ERRATUM_TOL",
]

ERRATUM_TOL = 5e-6
WEIGHTED_C_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
CLASSICAL_C_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)

# Published Table 1 (p = q = 1/2, f(t) = t^2/2): x -> (nu, lhs, rhs, actual).
PUBLISHED_TABLE: dict[float, tuple[float, float, float, float]] = {
    0.0: (0.500000000000000, -0.500000000000000, 0.0, -0.187500000000000),
    0.1: (0.406636443481054, -0.406636443481054, 0.006636443481054, -0.182500000000000),
    0.2: (0.318514120706339, -0.318514120706339, 0.018514120706339, -0.167500000000000),
    0.3: (0.233428745882118, -0.233428745882118, 0.033428745882118, -0.142500000000000),
    0.4: (0.150335250602855, -0.150335250602855, 0.050335250602855, -0.107500000000000),
    0.5: (0.068309886183791, -0.068309886183791, 0.068309886183791, -0.062500000000000),
    0.6: (0.086241033753880, -0.086241033753880, 0.186241033753880, -0.007500000000000),
    0.7: (0.102438865447664, -0.102438865447664, 0.302438865447664, 0.057500000000000),
    0.8: (0.113681356007205, -0.113681356007205, 0.413681356007205, 0.132500000000000),
    0.9: (0.111469208180188, -0.111469208180188, 0.511469208180188, 0.217500000000000),
    1.0: (0.0, 0.0, 0.500000000000000, 0.312500000000000),
}


# -- closed forms -------------------------------------------------------------------


def _beta_nu(x: float, p: float, q: float, partial_mean: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    mean = p / (p + q)
    below = betainc(x, p, q)
    if x <= mean:
        return mean - x - partial_mean + x * below
    return x * below - partial_mean


def beta_nu_closed(x: float, p: float, q: float) -> float:
    """nu(x, t*) at c = 0 for the Beta(p, q) weight.

    The partial mean int_0^x t w_{p,q}(t) dt is p/(p+q) I(x; p+1, q), i.e.
    the incomplete integral normalized by B(p, q).
    """
    return _beta_nu(x, p, q, p / (p + q) * betainc(x, p + 1.0, q))


def beta_nu_table_convention(x: float, p: float, q: float) -> float:
    """Same formula with the partial mean replaced by I(x; p+1, q).

    Normalizing by B(p+1, q) instead of B(p, q) reproduces the published
    table column.
    """
    return _beta_nu(x, p, q, betainc(x, p + 1.0, q))


def normal_nu_closed(x: float, mu: float, s: float, interval: Interval) -> float:
    """nu(x, t*) at c = 0 for the normal weight truncated to ``interval``."""
    a, b = interval.a, interval.b
    if not a <= x <= b:
        raise ValueError(f"x={x} outside [{a}, {b}]")
    if not s > 0:
        raise ValueError(f"normal scale must be positive, got {s}")
    pref = s / math.sqrt(2.0 * math.pi)

    def bump(t):
        return math.exp(-((t - mu) ** 2) / (2.0 * s * s))

    Fa, Fb, Fx = normal_cdf(a, mu, s), normal_cdf(b, mu, s), normal_cdf(x, mu, s)
    mass = Fb - Fa
    mean = mu - pref * (bump(b) - bump(a)) / mass
    if x <= mean:
        return (-pref * (bump(b) - bump(x)) + (mu - x) * (Fb - Fx)) / mass
    return (-pref * (bump(a) - bump(x)) + (mu - x) * (Fa - Fx)) / mass


def standard_normal_mean_closed() -> float:
    """Mean of the standard normal weight on [0, 1] written with Laplace's function."""
    return (1.0 - math.exp(-0.5)) / (laplace_phi(1.0) * math.sqrt(2.0 * math.pi))


def standard_normal_nu_closed(x: float) -> float:
    """nu at c = 0 for the standard normal weight on [0, 1], via Laplace's function."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    phi1 = laplace_phi(1.0)
    inv = 1.0 / math.sqrt(2.0 * math.pi)
    bump = math.exp(-0.5 * x * x)
    if x <= standard_normal_mean_closed():
        return (-inv * (math.exp(-0.5) - bump) - x * (phi1 - laplace_phi(x))) / phi1
    return (-inv * (1.0 - bump) + x * laplace_phi(x)) / phi1


# -- random battery -------------------------------------------------------------------


def random_function(seed: int, index: int, interval: Interval | None = None) -> FunctionSpec:
    """Random cubic, coefficients uniform in [-2, 2], from the (seed, index) stream."""
    rng = np.random.default_rng([seed, index])
    return FunctionSpec.polynomial(rng.uniform(-2.0, 2.0, size=4), interval or Interval(0.0, 1.0))


def battery_weights() -> tuple[Weight, ...]:
    return (Uniform(), Beta(2.0, 3.0), Beta(0.5, 0.5), TruncatedNormal(0.0, 1.0))


@dataclass
class CheckResult:
    """Pass/fail tally for one property; slack >= -tol counts as a pass."""

    name: str
    passed: int = 0
    failed: int = 0
    worst_slack: float = math.inf
    worst_case: str = ""

    def record(self, slacks, cases: Sequence[str] | None, tol: float) -> None:
        slacks = np.atleast_1d(np.asarray(slacks, dtype=float))
        if slacks.size == 0:
            return
        bad = ~(slacks >= -tol)
        self.failed += int(bad.sum())
        self.passed += int(slacks.size - bad.sum())
        i = int(np.nanargmin(slacks)) if not np.all(np.isnan(slacks)) else 0
        if slacks[i] < self.worst_slack or np.isnan(slacks[i]):
            self.worst_slack = float(slacks[i])
            self.worst_case = cases[i] if cases is not None else ""

    def merge(self, other: "CheckResult") -> None:
        self.passed += other.passed
        self.failed += other.failed
        if other.worst_slack < self.worst_slack:
            self.worst_slack = other.worst_slack
            self.worst_case = other.worst_case


@dataclass
class BatterySummary:
    seed: int
    trials: int
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(check.failed == 0 for check in self.checks.values())

    def check(self, name: str) -> CheckResult:
        if name not in self.checks:
            self.checks[name] = CheckResult(name)
        return self.checks[name]

    def merge(self, other: "BatterySummary") -> None:
        for name, result in other.checks.items():
            self.check(name).merge(result)

    def rows(self) -> list[tuple]:
        return [(c.name, c.passed, c.failed, c.worst_slack, c.worst_case) for c in self.checks.values()]


SUITES = ("sandwich", "kernel", "classical", "majorant", "structure")


def _trial(summary: BatterySummary, f: FunctionSpec, index: int, weights, suites, tol, n_x) -> None:
    gamma, Gamma = f.derivative_range
    sup_fp = f.sup_derivative
    unit = Interval(0.0, 1.0)
    for w in weights:
        xs = w.interval.grid(n_x)
        label = w.describe()
        cases, L_vals, lows, highs, kernels, l1s, maj, sup4 = [], [], [], [], [], [], [], []
        l2_gap, l2_cap = [], []
        for x in xs:
            for c in WEIGHTED_C_GRID:
                cases.append(f"f#{index} {label} x={x:g} c={c:g}")
                L = core.functional_L(f, x, c, w)
                L_vals.append(L)
                if "sandwich" in suites:
                    lo, hi = core.bounds_derivative((gamma, Gamma), x, c, w)
                    lows.append(lo)
                    highs.append(hi)
                if "kernel" in suites:
                    kernels.append(core.kernel_integral(f, x, c, w))
                if "majorant" in suites:
                    l1s.append(core.kernel_l1(x, c, w) * sup_fp)
                    maj.append(majorant.bound_majorant(f, x, c, w))
                    sup4.append(majorant.bound_sup_norm(f, x, c, w))
                if "sandwich" in suites and c == 1.0:
                    l2 = core.bound_l2((gamma, Gamma), x, w)
                    l2_gap.append(l2 - abs(L))
                    l2_cap.append(0.25 * (Gamma - gamma) * w.interval.length - l2)
        L_vals = np.array(L_vals)
        if "sandwich" in suites:
            summary.check("derivative_sandwich").record(
                np.minimum(L_vals - np.array(lows), np.array(highs) - L_vals), cases, tol
            )
            summary.check("l2_domination").record(l2_gap, None, tol)
            summary.check("l2_quarter_cap").record(l2_cap, None, tol)
        if "kernel" in suites:
            summary.check("kernel_identity").record(-np.abs(L_vals - np.array(kernels)), cases, tol)
        if "majorant" in suites:
            slack = majorant.sampling_slack(f, w.interval)
            summary.check("majorant_domination").record(np.array(maj) + slack - np.abs(L_vals), cases, tol)
            summary.check("sup_norm_bound").record(np.array(sup4) - np.abs(L_vals), cases, tol)
            summary.check("kernel_l1_bound").record(np.array(l1s) - np.abs(L_vals), cases, tol)
        if "classical" in suites and isinstance(w, Uniform):
            _classical_trial(summary, f, index, w, L_vals, xs, tol)

    if "majorant" in suites:
        _majorant_shape(summary, f, unit, index, tol)
        _k_functional(summary, f, unit, index, tol)


def _classical_trial(summary, f, index, w, weighted_L, xs, tol) -> None:
    interval = w.interval
    f_range = f.derivative_range
    sup_fp = f.sup_derivative
    e33, cheng, anas, equiv, cases = [], [], [], [], []
    for x in xs:
        for c in CLASSICAL_C_GRID:
            Lc = classical.functional_Lc(f, x, c, interval)
            lo, hi = classical.bounds_e33(f_range, x, c, interval)
            e33.append(min(Lc - lo, hi - Lc))
            cases.append(f"f#{index} uniform x={x:g} c={c:g}")
            if c == 1.0:
                cheng.append(classical.cheng_bound(f_range, interval) - abs(Lc))
            if c == 0.0:
                anas.append(classical.anastassiou_bound(x, interval) * sup_fp - abs(Lc))
    summary.check("e33_sandwich").record(e33, cases, tol)
    summary.check("eighth_bound_c1").record(cheng, None, tol)
    summary.check("quadratic_bound_c0").record(anas, None, tol)
    # Weighted functional with the uniform weight against the classical one.
    k = 0
    for x in xs:
        for c in WEIGHTED_C_GRID:
            equiv.append(-abs(weighted_L[k] - classical.functional_Lc(f, x, c, interval)))
            k += 1
    summary.check("uniform_equivalence").record(equiv, None, min(tol, 1e-10))


def _majorant_shape(summary, f, interval, index, tol) -> None:
    s, omega = majorant.sampled_modulus(f, interval)
    curve = majorant.majorant_curve(f, interval)
    tilde = majorant.eval_majorant(curve, s)
    slopes = np.diff(curve.values) / np.diff(curve.s)
    summary.check("majorant_shape").record(
        [
            -abs(float(curve.values[0])),
            float(np.min(np.diff(curve.values), initial=0.0)),
            -float(np.max(np.diff(slopes), initial=0.0)),
        ],
        [f"f#{index} zero", f"f#{index} monotone", f"f#{index} concave"],
        tol,
    )
    summary.check("majorant_pinch_lower").record(tilde - omega, None, tol)
    summary.check("majorant_pinch_upper").record(2.0 * omega[1:] - tilde[1:], None, tol)


_T_GRID = np.linspace(0.0, 1.0, 21)


def _k_probes(f: FunctionSpec, index: int) -> list[np.ndarray]:
    coeffs = np.array(f.coeffs)
    rng = np.random.default_rng([7919, index])
    probes = [np.zeros(1), coeffs, 0.5 * coeffs, np.array([coeffs[0], coeffs[1:].sum()])]
    probes += [coeffs + rng.normal(scale=0.3, size=coeffs.size) for _ in range(2)]
    probes += [rng.uniform(-2.0, 2.0, size=4) for _ in range(2)]
    return probes


def _k_functional(summary, f, interval, index, tol) -> None:
    """1/2 omega~(f; t) <= ||f - g|| + t/2 ||g'|| with exact polynomial norms."""
    curve = majorant.majorant_curve(f, interval)
    half_tilde = 0.5 * majorant.eval_majorant(curve, _T_GRID * interval.length)
    coeffs = np.array(f.coeffs)
    P = np.polynomial.polynomial
    slacks = []
    for g in _k_probes(f, index):
        diff = P.polysub(coeffs, g)
        dist = poly_sup_norm(diff, interval.a, interval.b)
        grad = poly_sup_norm(P.polyder(g) if g.size > 1 else np.zeros(1), interval.a, interval.b)
        slacks.append(dist + 0.5 * _T_GRID * interval.length * grad - half_tilde)
    summary.check("k_functional").record(np.concatenate(slacks), None, tol)


def _structure(summary: BatterySummary, weights, tol, n_x) -> None:
    """Per-(weight, x, c) facts that do not depend on f."""
    for w in weights:
        label = w.describe()
        nus, l1_gap, cases = [], [], []
        for x in w.interval.grid(n_x):
            for c in WEIGHTED_C_GRID:
                cases.append(f"{label} x={x:g} c={c:g}")
                nus.append(core.nu(x, c, w))
                l1_gap.append(-abs(core.kernel_l1(x, c, w) - core.kernel_l1_quad(x, c, w)))
        summary.check("nu_nonnegative").record(nus, cases, 0.0)
        summary.check("kernel_l1_closed_vs_quad").record(l1_gap, cases, 1e-9)
        for c in WEIGHTED_C_GRID:
            left = core.nu(w.sigma, c, w, "left")
            right = core.nu(w.sigma, c, w, "right")
            summary.check("nu_branch_continuity").record([-abs(left - right)], [f"{label} c={c:g}"], 1e-10)


def _zero_smoke(summary: BatterySummary, weights, tol, n_x) -> None:
    """f = 0: the functional and both bounds must all vanish."""
    for w in weights:
        zero = FunctionSpec.polynomial([0.0], w.interval)
        values, cases = [], []
        for x in w.interval.grid(n_x):
            for c in WEIGHTED_C_GRID:
                lo, hi = core.bounds_derivative(zero.derivative_range, x, c, w)
                L = core.functional_L(zero, x, c, w)
                values.append(-max(abs(lo), abs(hi), abs(L)))
                cases.append(f"zero {w.describe()} x={x:g} c={c:g}")
        summary.check("zero_function").record(values, cases, tol)


def _trig_probes(interval: Interval) -> list[FunctionSpec]:
    return [
        FunctionSpec.sampled(lambda t: np.sin(3 * t), lambda t: 3 * np.cos(3 * t), interval, "sin(3t)"),
        FunctionSpec.sampled(lambda t: np.sin(10 * t), lambda t: 10 * np.cos(10 * t), interval, "sin(10t)"),
        FunctionSpec.sampled(
            lambda t: np.cos(7 * t) + t, lambda t: 1 - 7 * np.sin(7 * t), interval, "cos(7t)+t"
        ),
    ]


def _trig_majorant(summary: BatterySummary, weights, tol, n_x) -> None:
    for w in weights:
        for g in _trig_probes(w.interval):
            slack = majorant.sampling_slack(g, w.interval)
            values, cases = [], []
            for x in w.interval.grid(n_x):
                for c in WEIGHTED_C_GRID:
                    L = core.functional_L(g, x, c, w)
                    values.append(majorant.bound_majorant(g, x, c, w) + slack - abs(L))
                    cases.append(f"{g.descriptor} {w.describe()} x={x:g} c={c:g}")
            summary.check("majorant_domination_trig").record(values, cases, tol)
        for g in _trig_probes(w.interval):
            s, omega = majorant.sampled_modulus(g, w.interval)
            tilde = majorant.eval_majorant(majorant.majorant_curve(g, w.interval), s)
            summary.check("majorant_pinch_lower").record(tilde - omega, None, tol)
            summary.check("majorant_pinch_upper").record(2.0 * omega[1:] - tilde[1:], None, tol)


def _run_chunk(args) -> BatterySummary:
    seed, indices, suites, tol, n_x, trials = args
    weights = battery_weights()
    summary = BatterySummary(seed, trials)
    for index in indices:
        _trial(summary, random_function(seed, index), index, weights, suites, tol, n_x)
    return summary


def run_battery(
    seed: int = 42,
    trials: int = 1000,
    *,
    suites: Iterable[str] = SUITES,
    tol: float = 1e-8,
    n_x: int = 11,
    workers: int = 1,
) -> BatterySummary:
    """Run the property suites over ``trials`` random cubics.

    Trials are independent and their RNG streams depend only on
    ``(seed, index)``; with ``workers > 1`` chunks run in separate
    processes and merge in index order, so the summary is identical.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    suites = tuple(suites)
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites {sorted(unknown)}; choose from {SUITES}")
    weights = battery_weights()
    summary = BatterySummary(seed, trials)
    if "structure" in suites:
        _structure(summary, weights, tol, n_x)
    if "sandwich" in suites:
        _zero_smoke(summary, weights, tol, n_x)
    if "majorant" in suites:
        _trig_majorant(summary, weights, tol, n_x)

    indices = list(range(trials))
    if workers <= 1:
        summary.merge(_run_chunk((seed, indices, suites, tol, n_x, trials)))
    else:
        # Contiguous blocks keep the merge order aligned with trial order.
        size = math.ceil(trials / workers)
        chunks = [indices[i : i + size] for i in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, [(seed, ch, suites, tol, n_x, trials) for ch in chunks]):
                summary.merge(part)
    return summary


# -- Table 1 ------------------------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    x: float
    nu_corrected: float
    nu_table_convention: float
    lhs: float
    rhs: float
    actual: float
    paper_nu: float | None = None
    paper_lhs: float | None = None
    paper_rhs: float | None = None
    paper_actual: float | None = None

    FIELDS = (
        "x", "nu_corrected", "nu_table_convention", "lhs", "rhs", "actual",
        "paper_nu", "paper_lhs", "paper_rhs", "paper_actual",
    )

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in self.FIELDS)


@dataclass(frozen=True)
class ErratumFinding:
    id: str
    location: str
    description: str
    computed_value: float | None
    paper_value: float | None

    FIELDS = ("id", "location", "computed", "paper")

    def row(self) -> tuple:
        return (self.id, self.location, self.computed_value, self.paper_value)


_E1_TEXT = (
    "nu column uses I(x; p+1, q) normalized by B(p+1, q) where the partial mean needs "
    "normalization by B(p, q); the gap is (1 - p/(p+q)) I(x; p+1, q) on both branches, "
    "so the printed l.h.s./r.h.s. are not the derivative bounds for this weight"
)


def _published(x: float):
    return PUBLISHED_TABLE.get(round(x, 10))


def table1(step: float = 0.1) -> tuple[list[Table1Row], list[ErratumFinding]]:
    """Rows for p = q = 1/2, f(t) = t^2/2 (gamma = 0, Gamma = 1) on x = 0, step, ..., 1."""
    count = round(1.0 / step)
    if count < 1 or abs(count * step - 1.0) > 1e-9:
        raise ValueError(f"step must divide 1, got {step}")
    p = q = 0.5
    w = Beta(p, q)
    f = FunctionSpec.polynomial([0.0, 0.0, 0.5])
    gamma, Gamma = f.derivative_range
    rows, errata = [], []
    for k in range(count + 1):
        x = k / count
        nu_ok = core.nu(x, 0.0, w)
        lower, upper = core.bounds_derivative((gamma, Gamma), x, 0.0, w)
        printed = _published(x)
        row = Table1Row(
            x=x,
            nu_corrected=nu_ok,
            nu_table_convention=beta_nu_table_convention(x, p, q),
            lhs=lower,
            rhs=upper,
            actual=core.functional_L(f, x, 0.0, w),
            paper_nu=printed[0] if printed else None,
            paper_lhs=printed[1] if printed else None,
            paper_rhs=printed[2] if printed else None,
            paper_actual=printed[3] if printed else None,
        )
        rows.append(row)
        if printed is None:
            continue
        for column, computed, shown in (
            ("nu", row.nu_corrected, row.paper_nu),
            ("l.h.s.", row.lhs, row.paper_lhs),
            ("r.h.s.", row.rhs, row.paper_rhs),
            ("actual", row.actual, row.paper_actual),
        ):
            if abs(computed - shown) > ERRATUM_TOL:
                errata.append(
                    ErratumFinding("E1", f"Table 1, x={x:g}, {column} column", _E1_TEXT, computed, shown)
                )
    return rows, errata


def erratum_report(step: float = 0.1) -> list[ErratumFinding]:
    _, findings = table1(step)
    w = Beta(0.5, 0.5)
    theta = 0.5 * core.kernel_l1(w.sigma, 1.0, w)
    findings.append(
        ErratumFinding(
            "E2",
            "majorant bound restated for c = 1",
            "the restatement uses 2 nu as the majorant argument; the general bound at c = 1 "
            "gives (1/2) int |P| = nu (example: Beta(1/2,1/2), x = 1/2)",
            theta,
            2.0 * core.nu(w.sigma, 1.0, w),
        )
    )
    findings.append(
        ErratumFinding(
            "E3",
            "majorant bound restated for f(x) minus the weighted mean",
            "prints '=' between |f(x) - weighted mean| and 2 omega~(...); only '<=' holds",
            None,
            None,
        )
    )
    return findings
