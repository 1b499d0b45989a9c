"""Unsupervised polygonal approximation of digital curves with an evaluation stack."""

from .approximator import ApproximationTrace, approximate
from .curve import DigitalCurve, Polygon, canonicalize, decode_chain_code, encode_chain_code, trace_boundary
from .errors import (
    AmbiguousComponentError,
    ClosenessError,
    CostGuardError,
    CurveFormatError,
    DegenerateCurveError,
    NoComponentError,
    ScanPolyError,
)
from .metrics import MetricsReport, evaluate
from .optimal import OptimalErrorTable, approx_optimal, dp_min_eps, full_optimal, rosin_measure
from .transforms import RobustnessReport, robustness_experiment, rotate_curve, scale_curve

__all__ = [
    "AmbiguousComponentError", "ApproximationTrace", "ClosenessError", "CostGuardError",
    "CurveFormatError", "DegenerateCurveError", "DigitalCurve", "MetricsReport",
    "NoComponentError", "OptimalErrorTable", "Polygon", "RobustnessReport", "ScanPolyError",
    "approx_optimal", "approximate", "canonicalize", "decode_chain_code", "dp_min_eps",
    "encode_chain_code", "evaluate", "full_optimal", "robustness_experiment", "rosin_measure",
    "rotate_curve", "scale_curve", "trace_boundary",
]
