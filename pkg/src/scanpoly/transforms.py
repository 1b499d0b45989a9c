"""Rotation/scaling of digital curves and the compactness robustness experiment."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .curve import DigitalCurve, Polygon, canonicalize
from .errors import DegenerateCurveError, ScanPolyError
from .metrics import coefficient_of_variation, compactness

ROTATIONS = tuple(range(10, 90, 10))
SCALES = (0.2, 0.4, 0.6, 0.8, 1.2, 1.4, 1.6, 1.8, 2.0)


def round_half_away(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    return (np.sign(v) * np.floor(np.abs(v) + 0.5)).astype(np.int64)


def bresenham(p, q) -> list[tuple[int, int]]:
    """Lattice points strictly between ``p`` and ``q`` on the Bresenham line."""
    x0, y0 = int(p[0]), int(p[1])
    x1, y1 = int(q[0]), int(q[1])
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    out = []
    x, y = x0, y0
    while True:
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
        if (x, y) == (x1, y1):
            return out
        out.append((x, y))


def repair(points, closed: bool = True) -> DigitalCurve:
    """Drop consecutive duplicates and Bresenham-fill gaps, then canonicalize."""
    pts = [tuple(map(int, p)) for p in points]
    dedup = [p for k, p in enumerate(pts) if k == 0 or p != pts[k - 1]]
    if closed:
        while len(dedup) > 1 and dedup[-1] == dedup[0]:
            dedup.pop()
    filled = []
    count = len(dedup)
    last = count if closed else count - 1
    for k in range(count):
        filled.append(dedup[k])
        if k < last:
            nxt = dedup[(k + 1) % count]
            if max(abs(nxt[0] - dedup[k][0]), abs(nxt[1] - dedup[k][1])) > 1:
                filled.extend(bresenham(dedup[k], nxt))
    need = 3 if closed else 2
    if len(filled) < need:
        raise DegenerateCurveError(f"transformed curve collapsed to {len(filled)} points")
    return canonicalize(DigitalCurve(filled, closed))


def rotate_points(points, theta_degrees: float, center=(0, 0)) -> np.ndarray:
    """Rotate lattice points counter-clockwise about ``center`` and round to integers."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    c = np.asarray(center, dtype=np.float64)
    if theta_degrees % 90 == 0:
        # exact quarter turns; avoids cos(90) = 6e-17 residue
        t = math.radians(theta_degrees)
        cos_t, sin_t = round(math.cos(t)), round(math.sin(t))
    else:
        t = math.radians(theta_degrees)
        cos_t, sin_t = math.cos(t), math.sin(t)
    rel = pts - c
    x = c[0] + rel[:, 0] * cos_t - rel[:, 1] * sin_t
    y = c[1] + rel[:, 0] * sin_t + rel[:, 1] * cos_t
    return np.column_stack([round_half_away(x), round_half_away(y)])


def rotate_curve(curve: DigitalCurve, theta_degrees: float, center=None) -> DigitalCurve:
    """Rotate counter-clockwise about ``center`` and snap back to the lattice.

    The default centre is the centroid rounded to the nearest lattice point,
    which makes quarter turns exact lattice permutations.
    """
    if center is None:
        center = round_half_away(curve.points.mean(axis=0))
    return repair(rotate_points(curve.points, theta_degrees, center), curve.closed)


def scale_curve(curve: DigitalCurve, s: float) -> DigitalCurve:
    """Multiply coordinates by ``s`` and round; duplicates removed, gaps filled."""
    if s <= 0:
        raise ValueError("scale factor must be positive")
    return repair(round_half_away(curve.points * s), curve.closed)


def variant_set(curve: DigitalCurve) -> tuple[dict[str, DigitalCurve], dict[str, str]]:
    """Original plus 8 rotations and 9 scalings; degenerate variants go to the second dict."""
    variants = {"original": curve}
    skipped = {}
    jobs = [(f"rot{a}", rotate_curve, a) for a in ROTATIONS]
    jobs += [(f"scale{s:.1f}", scale_curve, s) for s in SCALES]
    for label, fn, arg in jobs:
        try:
            variants[label] = fn(curve, arg)
        except DegenerateCurveError as exc:
            skipped[label] = str(exc)
    return variants, skipped


@dataclass
class RobustnessReport:
    entries: dict[str, dict] = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)
    cov_percent: float = float("nan")

    @property
    def partial(self) -> bool:
        return bool(self.skipped)

    @property
    def compactness_values(self) -> list[float]:
        return [e["compactness"] for e in self.entries.values()]

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "variants": self.entries,
            "skipped": self.skipped,
            "partial": self.partial,
            "cov_percent": self.cov_percent,
        }


def _default_approximator(curve: DigitalCurve) -> Polygon:
    from .approximator import approximate

    return approximate(curve)[0]


def _run_variant(args):
    label, curve, fn = args
    try:
        poly = fn(curve)
    except ScanPolyError as exc:
        return label, None, str(exc)
    return label, {"n": curve.n, "m": poly.m,
                   "compactness": compactness(poly.coordinates(curve))}, None


def robustness_experiment(curve: DigitalCurve,
                          approximator_fn: Callable[[DigitalCurve], Polygon] | None = None,
                          jobs: int = 1) -> RobustnessReport:
    """Compactness of the approximation of every variant, and its CoV in percent."""
    fn = approximator_fn or _default_approximator
    variants, skipped = variant_set(curve)
    tasks = [(label, c, fn) for label, c in variants.items()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_variant, tasks))
    else:
        results = [_run_variant(t) for t in tasks]
    report = RobustnessReport(skipped=dict(skipped))
    for label, entry, problem in results:
        if entry is None:
            report.skipped[label] = problem
        else:
            report.entries[label] = entry
    values = report.compactness_values
    if len(values) >= 2:
        report.cov_percent = coefficient_of_variation(values)
    return report
