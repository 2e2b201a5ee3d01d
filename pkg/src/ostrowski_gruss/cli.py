"""Command-line front end: bound reports, Table 1, verification and majorant curves as CSV.

Exit codes: 0 success, 1 a verification check failed, 2 bad arguments,
3 output could not be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import classical, core, majorant, verify
from .core import FunctionSpec
from .weights import Beta, Interval, Uniform, Weight, parse_weight

__all__ = ["CliConfig", "UsageError", "build_parser", "parse_args", "emit", "main"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SUBCOMMANDS = ("bounds", "table1", "verify", "majorant", "classical", "erratum")


class UsageError(ValueError):
    """Arguments parsed but violate a precondition of the requested computation."""


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    weight_spec: str = "uniform"
    interval: tuple[float, float] = (0.0, 1.0)
    function_spec: str | None = None
    derivative_range: tuple[float, float] | None = None
    x: str | None = None
    c: float = 1.0
    tol: float = 1e-10
    seed: int = 42
    trials: int = 1000
    workers: int = 1
    suites: tuple[str, ...] = verify.SUITES
    step: float = 0.1
    grid: int = majorant.DEFAULT_GRID
    no_majorant: bool = False
    out: str | None = None
    format: str = "csv"


@dataclass
class Output:
    header: tuple[str, ...]
    rows: list[tuple]
    status: int = EXIT_OK
    side_header: tuple[str, ...] | None = None
    side_rows: list[tuple] | None = None
    side_name: str | None = None


# -- parsing -----------------------------------------------------------------------


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ostrowski-gruss",
        description="Two-sided error bounds for weighted one-point quadrature.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "text"), default="csv")

    def function_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--interval", type=_pair, default=(0.0, 1.0), help="a,b (default 0,1)")
        p.add_argument("--f", dest="function_spec", required=True, help="poly:c0,c1,... or witness")
        p.add_argument(
            "--derivative-range", type=_pair, default=None,
            help="gamma,Gamma for the witness function",
        )

    p = sub.add_parser("bounds", help="derivative, majorant and L2 bounds at one or more x")
    function_args(p)
    p.add_argument("--weight", dest="weight_spec", default="uniform", help="uniform | beta:p,q | normal:mu,s")
    p.add_argument("--x", required=True, help="point, comma list, or lo:hi:step grid")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=majorant.DEFAULT_GRID, help="initial majorant grid size")
    p.add_argument("--no-majorant", action="store_true", help="skip the majorant bound")
    common(p)

    p = sub.add_parser("classical", help="unweighted functional and closed-form bounds")
    function_args(p)
    p.add_argument("--x", required=True, help="point, comma list, or lo:hi:step grid")
    p.add_argument("--c", type=float, default=1.0)
    common(p)

    p = sub.add_parser("majorant", help="sampled modulus of continuity and its concave majorant")
    function_args(p)
    p.add_argument("--weight", dest="weight_spec", default="uniform", help="used only by witness")
    p.add_argument("--grid", type=int, default=majorant.DEFAULT_GRID)
    common(p)

    p = sub.add_parser("table1", help="Beta(1/2,1/2) table with corrected and printed values")
    p.add_argument("--step", type=float, default=0.1)
    common(p)

    p = sub.add_parser("erratum", help="list discrepancies against the published values")
    p.add_argument("--step", type=float, default=0.1)
    common(p)

    p = sub.add_parser("verify", help="randomized property battery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-10, help="a check passes when slack >= -tol")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--suites", default=",".join(verify.SUITES), help="comma list of " + ",".join(verify.SUITES))
    common(p)
    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Parse ``argv``; argparse exits with status 2 on malformed input."""
    ns = build_parser().parse_args(list(argv))
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if "suites" in values:
        values["suites"] = tuple(s.strip() for s in values["suites"].split(",") if s.strip())
    return CliConfig(**values)


def parse_x(text: str, interval: Interval) -> list[float]:
    """``0.4``, ``0.1,0.5`` or ``lo:hi:step`` (inclusive of hi when step divides)."""
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            if not step > 0 or hi < lo:
                raise UsageError(f"bad grid {text!r}: need lo <= hi and step > 0")
            count = math.floor((hi - lo) / step + 1e-9)
            xs = [lo + k * step for k in range(count + 1)]
            if abs(lo + count * step - hi) <= 1e-9 * max(1.0, abs(hi)):
                xs[-1] = hi
        else:
            xs = [float(v) for v in text.split(",")]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"cannot parse --x {text!r}") from None
    for x in xs:
        if not interval.contains(x):
            raise UsageError(f"x={x} outside [{interval.a}, {interval.b}]")
    return xs


def _weight(cfg: CliConfig) -> Weight:
    interval = Interval(*cfg.interval)
    w = parse_weight(cfg.weight_spec, interval)
    if isinstance(w, Beta) and interval != w.interval:
        raise UsageError("beta weights live on [0, 1]; drop --interval or pass 0,1")
    return w


def parse_function(cfg: CliConfig, w: Weight) -> FunctionSpec:
    text = cfg.function_spec or ""
    kind, _, args = text.partition(":")
    if kind == "poly":
        try:
            coeffs = [float(v) for v in args.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse polynomial {text!r}") from None
        return FunctionSpec.polynomial(coeffs, w.interval)
    if kind == "witness" and not args:
        if cfg.derivative_range is None:
            raise UsageError("witness needs --derivative-range gamma,Gamma")
        return core.sharpness_witness(w, *cfg.derivative_range)
    raise UsageError(f"unrecognised function {text!r}; expected poly:c0,c1,... or witness")


# -- commands ----------------------------------------------------------------------


def _bounds(cfg: CliConfig) -> Output:
    core._check_c(cfg.c)
    w = _weight(cfg)
    f = parse_function(cfg, w)
    xs = parse_x(cfg.x, w.interval)
    rows = [
        core.bound_report(f, x, cfg.c, w, majorant=not cfg.no_majorant, n_grid=cfg.grid).row()
        for x in xs
    ]
    return Output(core.BoundReport.FIELDS, rows)


def _classical(cfg: CliConfig) -> Output:
    if not 0.0 <= cfg.c <= 2.0:
        raise UsageError(f"classical bounds need c in [0, 2], got c={cfg.c}")
    interval = Interval(*cfg.interval)
    f = parse_function(cfg, Uniform(interval))
    xs = parse_x(cfg.x, interval)
    rows = [classical.classical_report(f, x, cfg.c, interval).row() for x in xs]
    return Output(classical.ClassicalReport.FIELDS, rows)


def _majorant(cfg: CliConfig) -> Output:
    if cfg.grid < 2:
        raise UsageError(f"--grid must be >= 2, got {cfg.grid}")
    w = _weight(cfg)
    f = parse_function(cfg, w)
    s, omega = majorant.sampled_modulus(f, w.interval, cfg.grid)
    curve = majorant.majorant_curve(f, w.interval, cfg.grid)
    hull = majorant.eval_majorant(curve, s)
    knots = np.isin(s, curve.s)
    rows = [(si, oi, hi, int(k)) for si, oi, hi, k in zip(s, omega, hull, knots)]
    return Output(("s", "omega", "majorant", "knot"), rows)


def _table1(cfg: CliConfig) -> Output:
    rows, errata = verify.table1(cfg.step)
    return Output(
        verify.Table1Row.FIELDS,
        [r.row() for r in rows],
        side_header=verify.ErratumFinding.FIELDS,
        side_rows=[e.row() for e in errata],
        side_name="errata.csv",
    )


def _erratum(cfg: CliConfig) -> Output:
    findings = verify.erratum_report(cfg.step)
    header = verify.ErratumFinding.FIELDS + ("description",)
    return Output(header, [e.row() + (e.description,) for e in findings])


def _verify(cfg: CliConfig) -> Output:
    if cfg.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {cfg.trials}")
    if not math.isfinite(cfg.tol):
        raise UsageError(f"--tol must be finite, got {cfg.tol}")
    summary = verify.run_battery(
        cfg.seed, cfg.trials, suites=cfg.suites, tol=cfg.tol, workers=max(1, cfg.workers)
    )
    return Output(
        ("check", "passed", "failed", "worst_slack", "worst_case"),
        summary.rows(),
        status=EXIT_OK if summary.ok else EXIT_FAILED,
    )


_COMMANDS = {
    "bounds": _bounds,
    "classical": _classical,
    "majorant": _majorant,
    "table1": _table1,
    "erratum": _erratum,
    "verify": _verify,
}


# -- output ------------------------------------------------------------------------


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.15g" % v
    return str(v)


def render(header: Sequence[str], rows: Sequence[tuple], fmt: str = "csv") -> str:
    cells = [[format_value(v) for v in row] for row in rows]
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
    for line in [list(header)] + cells:
        buf.write("  ".join(v.rjust(wd) for v, wd in zip(line, widths)).rstrip() + "\n")
    return buf.getvalue()


def emit(output: Output, cfg: CliConfig, stdout=None, stderr=None) -> int:
    """Write ``output`` where ``cfg`` says; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    main_text = render(output.header, output.rows, cfg.format)
    side_text = None
    if output.side_rows is not None:
        side_text = render(output.side_header, output.side_rows, cfg.format)
    try:
        if cfg.out:
            path = Path(cfg.out)
            with open(path, "w", newline="") as fh:
                fh.write(main_text)
            if side_text is not None:
                with open(path.with_name(output.side_name), "w", newline="") as fh:
                    fh.write(side_text)
        else:
            stdout.write(main_text)
            if side_text is not None:
                stderr.write(side_text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=stderr)
        return EXIT_IO
    return output.status


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    try:
        output = _COMMANDS[cfg.subcommand](cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return emit(output, cfg)


if __name__ == "__main__":
    sys.exit(main())
