"""Approximation quality measures: compression ratio, error sums, weighted
figures of merit, compactness and coefficient of variation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .curve import DigitalCurve, Polygon
from .geometry import polygon_distances

CSV_COLUMNS = ("n", "m", "cr", "e2", "einf", "fom", "we2", "we3", "weinf", "compactness")


@dataclass(frozen=True)
class MetricsReport:
    n: int
    m: int
    cr: float
    e2: float
    einf: float
    fom: float
    we2: float
    we3: float
    weinf: float
    compactness: float

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def compression_ratio(n: int, m: int) -> float:
    if m < 1:
        raise ValueError("polygon must have at least one vertex")
    if n < m:
        raise ValueError(f"n={n} smaller than m={m}")
    return n / m


def approximation_errors(curve: DigitalCurve, polygon: Polygon) -> tuple[float, float]:
    """(E2, Einf) summed over every side of ``polygon``."""
    d = polygon_distances(curve, polygon.vertex_indices)
    return float(np.sum(d * d)), float(d.max())


def weighted_measures(cr: float, e2: float, einf: float) -> tuple[float, float, float, float]:
    """(FOM, WE2, WE3, WEinf). FOM is ``inf`` for an exact fit."""
    fom = cr / e2 if e2 > 0 else math.inf
    return fom, e2 / cr**2, e2 / cr**3, einf / cr


def compactness(vertices) -> float:
    """Shoelace area over squared perimeter; ``1/(4*pi)`` for a disc."""
    v = np.asarray(vertices, dtype=np.float64)
    if len(v) < 3:
        raise ValueError("compactness needs at least 3 vertices")
    nxt = np.roll(v, -1, axis=0)
    area = 0.5 * abs(np.sum(v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]))
    perimeter = np.sum(np.hypot(*(nxt - v).T))
    if perimeter == 0:
        raise ValueError("compactness undefined for coincident vertices")
    return float(area / perimeter**2)


def coefficient_of_variation(values) -> float:
    """Population standard deviation over mean, in percent."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("need at least 2 values")
    mean = v.mean()
    if mean == 0:
        raise ZeroDivisionError("coefficient of variation undefined for zero mean")
    return float(100.0 * v.std(ddof=0) / mean)


def evaluate(curve: DigitalCurve, polygon: Polygon) -> MetricsReport:
    e2, einf = approximation_errors(curve, polygon)
    cr = compression_ratio(curve.n, polygon.m)
    fom, we2, we3, weinf = weighted_measures(cr, e2, einf)
    comp = compactness(polygon.coordinates(curve)) if polygon.m >= 3 else 0.0
    return MetricsReport(curve.n, polygon.m, cr, e2, einf, fom, we2, we3, weinf, comp)
