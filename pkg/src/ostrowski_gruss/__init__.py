"""Certified two-sided error bounds for weighted one-point quadrature rules."""

from .classical import classical_report
from .core import (
    BoundReport,
    FunctionSpec,
    bound_l2,
    bound_report,
    bounds_derivative,
    functional_L,
    kernel_integral,
    kernel_l1,
    kernel_P,
    nu,
    sharpness_witness,
    t_star,
)
from .majorant import MajorantCurve, bound_majorant, majorant_curve, modulus
from .weights import Beta, CustomWeight, Interval, TruncatedNormal, Uniform, Weight, parse_weight

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "FunctionSpec",
    "Interval",
    "Weight",
    "Uniform",
    "Beta",
    "TruncatedNormal",
    "CustomWeight",
    "parse_weight",
    "t_star",
    "nu",
    "kernel_P",
    "kernel_l1",
    "kernel_integral",
    "functional_L",
    "bounds_derivative",
    "bound_l2",
    "sharpness_witness",
    "bound_report",
    "MajorantCurve",
    "modulus",
    "majorant_curve",
    "bound_majorant",
    "classical_report",
]
