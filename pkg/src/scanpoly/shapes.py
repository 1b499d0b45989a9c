"""Synthetic digital shapes used by tests, benchmarks and experiment scripts."""

from __future__ import annotations

import math

import numpy as np

from .curve import DigitalCurve, canonicalize, trace_boundary


def rectangle(width: int, height: int, origin=(0, 0)) -> DigitalCurve:
    """Boundary of the axis-aligned rectangle with corners ``origin`` and ``origin + (w, h)``."""
    if width < 1 or height < 1:
        raise ValueError("rectangle sides must be >= 1")
    x0, y0 = origin
    pts = [(x0 + x, y0) for x in range(width)]
    pts += [(x0 + width, y0 + y) for y in range(height)]
    pts += [(x0 + x, y0 + height) for x in range(width, 0, -1)]
    pts += [(x0, y0 + y) for y in range(height, 0, -1)]
    return canonicalize(DigitalCurve(pts))


def square(side: int, origin=(0, 0)) -> DigitalCurve:
    return rectangle(side, side, origin)


def corner_indices(curve: DigitalCurve, corners) -> list[int]:
    lookup = {p: i for i, p in enumerate(curve.as_tuples())}
    return sorted(lookup[tuple(c)] for c in corners)


def _grid(extent: float, margin: int = 2):
    size = int(math.ceil(extent)) + margin
    coords = np.arange(-size, size + 1)
    x, y = np.meshgrid(coords, -coords)  # row 0 is the top (largest y)
    return x, y


def disk(radius: float, center=(0.0, 0.0)) -> DigitalCurve:
    x, y = _grid(radius + max(abs(center[0]), abs(center[1])))
    return trace_boundary((x - center[0]) ** 2 + (y - center[1]) ** 2 <= radius**2)


def ellipse(a: float, b: float, angle_deg: float = 0.0) -> DigitalCurve:
    x, y = _grid(max(a, b))
    t = math.radians(angle_deg)
    u = x * math.cos(t) + y * math.sin(t)
    v = -x * math.sin(t) + y * math.cos(t)
    return trace_boundary((u / a) ** 2 + (v / b) ** 2 <= 1.0)


def half_disk(radius: float) -> DigitalCurve:
    """Upper half of a digitized disc, flat side down."""
    x, y = _grid(radius)
    return trace_boundary((x**2 + y**2 <= radius**2) & (y >= 0))


def polygon_mask(vertices, extent: float | None = None) -> np.ndarray:
    """Even-odd fill of a real-valued polygon on a centred integer grid."""
    v = np.asarray(vertices, dtype=np.float64)
    extent = extent if extent is not None else float(np.abs(v).max())
    x, y = _grid(extent)
    inside = np.zeros(x.shape, dtype=bool)
    for (x1, y1), (x2, y2) in zip(v, np.roll(v, -1, axis=0)):
        if y1 == y2:
            continue
        crosses = (y1 > y) != (y2 > y)
        xint = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (x < xint)
    return inside


def star(spikes: int, r_outer: float, r_inner: float, rotation_deg: float = 90.0) -> DigitalCurve:
    angles = np.radians(rotation_deg) + np.arange(2 * spikes) * math.pi / spikes
    radii = np.where(np.arange(2 * spikes) % 2 == 0, r_outer, r_inner)
    verts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    return trace_boundary(polygon_mask(verts))


def l_shape(width: int, height: int, thickness: int) -> DigitalCurve:
    """Pixel L: a ``width x thickness`` foot and a ``thickness x height`` stem."""
    mask = np.zeros((height + 2, width + 2), dtype=bool)
    mask[height + 1 - thickness:height + 1, 1:width + 1] = True
    mask[1:height + 1, 1:thickness + 1] = True
    return trace_boundary(mask)


def fixture_family() -> dict[str, DigitalCurve]:
    """Fifty-plus named closed curves spanning the shape classes used in testing."""
    shapes: dict[str, DigitalCurve] = {}
    for a in (2, 3, 5, 8, 13, 20, 31):
        shapes[f"square{a}"] = square(a, origin=(a % 3, a % 5))
    for w, h in ((8, 4), (3, 11), (15, 6), (21, 9), (40, 17), (5, 30), (2, 7), (12, 12), (64, 3), (9, 2)):
        shapes[f"rect{w}x{h}"] = rectangle(w, h)
    for r in (4, 6.5, 9, 12, 17.3, 25, 33, 48, 5.5, 10.7, 14, 60):
        shapes[f"disk{r}"] = disk(r)
    for a, b, t in ((10, 5, 0), (20, 8, 15), (30, 12, 40), (15, 14, 0), (25, 6, 70),
                    (40, 20, 33), (12, 7, 120), (50, 30, 10), (9, 3, 25), (35, 33, 55)):
        shapes[f"ellipse{a}x{b}r{t}"] = ellipse(a, b, t)
    for k, ro, ri, rot in ((5, 20, 8, 90), (5, 30, 14, 0), (6, 25, 12, 15), (4, 18, 6, 45),
                           (7, 35, 18, 10), (8, 40, 25, 0), (3, 22, 9, 90), (5, 45, 20, 3),
                           (6, 15, 9, 0), (9, 50, 33, 7)):
        shapes[f"star{k}_{ro}_{ri}_{rot}"] = star(k, ro, ri, rot)
    for w, h, t in ((10, 14, 4), (20, 20, 6), (30, 12, 5), (12, 30, 7), (25, 40, 10),
                    (16, 16, 3), (40, 25, 12), (8, 9, 3)):
        shapes[f"L{w}x{h}t{t}"] = l_shape(w, h, t)
    for r, cx, cy in ((7.5, 0.3, 0.1), (14.2, 0.5, 0.5), (21.7, 0.25, 0.8)):
        shapes[f"disk{r}_off"] = disk(r, (cx, cy))
    for r in (15, 22.5):
        shapes[f"half_disk{r}"] = half_disk(r)
    shapes.update(small_fixtures())
    return shapes


def small_fixtures() -> dict[str, DigitalCurve]:
    """Curves with at most 40 points, small enough for exhaustive optimal search."""
    shapes: dict[str, DigitalCurve] = {}
    for a in (4, 6, 7, 9, 10):
        shapes[f"small_square{a}"] = square(a)
    for w, h in ((4, 3), (6, 5), (7, 2), (10, 3), (5, 9), (12, 4)):
        shapes[f"small_rect{w}x{h}"] = rectangle(w, h)
    for r in (3, 3.6, 4.5, 5, 6, 2.5):
        shapes[f"small_disk{r}"] = disk(r)
    for a, b, t in ((8, 4, 30), (7, 3, 60), (9, 5, 10), (6, 4, 45)):
        shapes[f"small_ellipse{a}x{b}r{t}"] = ellipse(a, b, t)
    for k, ro, ri, rot in ((5, 9, 4, 90), (4, 8, 3, 0), (6, 10, 6, 0)):
        shapes[f"small_star{k}_{ro}_{ri}_{rot}"] = star(k, ro, ri, rot)
    for w, h, t in ((6, 6, 2), (7, 10, 3), (9, 5, 2), (5, 8, 2)):
        shapes[f"small_L{w}x{h}t{t}"] = l_shape(w, h, t)
    return shapes
