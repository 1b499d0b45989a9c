"""Distance primitives and chord-error accumulation on digital curves.

Distances are measured to the infinite line through a chord's endpoints.
Cross and dot products of lattice points are formed in integers first so
that predicates and argmax/argmin ties are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .curve import DigitalCurve


class DegenerateChordError(ValueError):
    pass


class SegmentError(NamedTuple):
    sse: float
    max_err: float
    argmax_index: Optional[int]


def seg_length(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def point_line_distance(p, a, b) -> float:
    """Perpendicular distance from ``p`` to the line through ``a`` and ``b``."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx == 0 and dy == 0:
        raise DegenerateChordError(f"chord endpoints coincide at {tuple(a)}")
    cross = dx * (p[1] - a[1]) - dy * (p[0] - a[0])
    return abs(cross) / math.hypot(dx, dy)


def distance_sq(p, a, b) -> Fraction:
    """Exact squared distance from ``p`` to the line through ``a`` and ``b``.

    Coincident ``a`` and ``b`` give the squared distance to that point.
    """
    dx, dy = int(b[0]) - int(a[0]), int(b[1]) - int(a[1])
    rx, ry = int(p[0]) - int(a[0]), int(p[1]) - int(a[1])
    if dx == 0 and dy == 0:
        return Fraction(rx * rx + ry * ry)
    cross = dx * ry - dy * rx
    return Fraction(cross * cross, dx * dx + dy * dy)


def is_sharp_turn(p_i, p_k, p_j) -> bool:
    """True when the turn at ``p_k`` exceeds 90 degrees (negative dot product)."""
    dot = (p_k[0] - p_i[0]) * (p_j[0] - p_k[0]) + (p_k[1] - p_i[1]) * (p_j[1] - p_k[1])
    return dot < 0


def interior_indices(n: int, i: int, j: int, closed: bool = True) -> np.ndarray:
    """Curve indices strictly between ``i`` and ``j`` walking forward."""
    if i == j:
        raise ValueError("segment endpoints must differ")
    if closed:
        span = (j - i) % n
        return (i + np.arange(1, span)) % n
    if j < i:
        raise ValueError(f"open-curve segment must run forward, got {i}->{j}")
    return np.arange(i + 1, j)


def interior_distances(curve: DigitalCurve, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """(interior indices, perpendicular distances) for the chord ``i -> j``.

    A chord whose endpoints are the same lattice point (possible when a
    boundary revisits a pixel) measures plain distance to that point.
    """
    idx = interior_indices(curve.n, i, j, curve.closed)
    pts = curve.points
    a, b = pts[i], pts[j]
    d = b - a
    rel = pts[idx] - a
    if d[0] == 0 and d[1] == 0:
        return idx, np.hypot(rel[:, 0], rel[:, 1])
    cross = d[0] * rel[:, 1] - d[1] * rel[:, 0]
    return idx, np.abs(cross) / math.hypot(d[0], d[1])


def max_distance_sq(curve: DigitalCurve, i: int, j: int) -> Fraction:
    """Exact squared maximum interior distance for the chord ``i -> j`` (0 if none)."""
    idx = interior_indices(curve.n, i, j, curve.closed)
    if idx.size == 0:
        return Fraction(0)
    pts = curve.points
    a, b = pts[i], pts[j]
    d = b - a
    rel = pts[idx] - a
    if d[0] == 0 and d[1] == 0:
        return Fraction(int((rel * rel).sum(axis=1).max()))
    cross = int(np.abs(d[0] * rel[:, 1] - d[1] * rel[:, 0]).max())
    return Fraction(cross * cross, int(d[0] * d[0] + d[1] * d[1]))


def segment_error(curve: DigitalCurve, i: int, j: int) -> SegmentError:
    idx, dist = interior_distances(curve, i, j)
    if idx.size == 0:
        return SegmentError(0.0, 0.0, None)
    k = int(np.argmax(dist))
    return SegmentError(float(np.sum(dist * dist)), float(dist[k]), int(idx[k]))


class ChordCosts:
    """O(1) squared-error of any chord via prefix sums of point moments.

    Moments are kept as exact integers (int64 when the coordinate range
    allows it, Python ints otherwise), so ``sse`` agrees with direct
    summation up to the final division.

    Indices passed in are curve indices; ``span`` is the forward step count
    from ``i`` to ``j`` (``1 <= span <= n``).
    """

    def __init__(self, curve: DigitalCurve):
        self.n = n = curve.n
        self.closed = curve.closed
        base = curve.points - curve.points.min(axis=0)
        extent = int(base.max()) + 1
        dtype = np.int64 if 16 * (2 * n + 1) * extent**4 < 2**62 else object
        pts = np.concatenate([base, base]).astype(dtype)
        x, y = pts[:, 0], pts[:, 1]
        zero = np.zeros(1, dtype=dtype)
        self.x, self.y = x, y
        self.sx = np.concatenate([zero, np.cumsum(x)])
        self.sy = np.concatenate([zero, np.cumsum(y)])
        self.sxx = np.concatenate([zero, np.cumsum(x * x)])
        self.syy = np.concatenate([zero, np.cumsum(y * y)])
        self.sxy = np.concatenate([zero, np.cumsum(x * y)])
        self._lists = None

    def _num_den(self, i: int, span: int) -> tuple[int, int]:
        if self._lists is None:
            self._lists = tuple(a.tolist() for a in
                                (self.x, self.y, self.sx, self.sy, self.sxx, self.syy, self.sxy))
        x, y, Sx, Sy, Sxx, Syy, Sxy = self._lists
        lo, hi, k = i + 1, i + span, span - 1
        ax, ay = x[i], y[i]
        jj = hi % self.n if self.closed else hi
        dx, dy = x[jj] - ax, y[jj] - ay
        sx = Sx[hi] - Sx[lo]
        sy = Sy[hi] - Sy[lo]
        suu = Sxx[hi] - Sxx[lo] - 2 * ax * sx + k * ax * ax
        svv = Syy[hi] - Syy[lo] - 2 * ay * sy + k * ay * ay
        den = dx * dx + dy * dy
        if den == 0:
            return suu + svv, 1
        suv = Sxy[hi] - Sxy[lo] - ax * sy - ay * sx + k * ax * ay
        return dx * dx * svv - 2 * dx * dy * suv + dy * dy * suu, den

    def sse_scalar(self, i: int, span: int) -> float:
        """Pure-Python variant of :meth:`sse_span` for single chords."""
        num, den = self._num_den(i, span)
        return num / den

    def _span(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("segment endpoints must differ")
        span = (j - i) % self.n if self.closed else j - i
        if span <= 0:
            raise ValueError(f"open-curve segment must run forward, got {i}->{j}")
        return span

    def sse_exact(self, i: int, j: int) -> Fraction:
        """Chord SSE as an exact rational."""
        return Fraction(*self._num_den(i, self._span(i, j)))

    def sse_span(self, i, span):
        """Sum of squared distances of the ``span - 1`` interior points."""
        i = np.asarray(i)
        span = np.asarray(span)
        lo = i + 1
        hi = i + span
        k = span - 1
        ax, ay = self.x[i], self.y[i]
        jj = hi % self.n if self.closed else hi
        dx = self.x[jj] - ax
        dy = self.y[jj] - ay
        sx = self.sx[hi] - self.sx[lo]
        sy = self.sy[hi] - self.sy[lo]
        suu = self.sxx[hi] - self.sxx[lo] - 2 * ax * sx + k * ax * ax
        svv = self.syy[hi] - self.syy[lo] - 2 * ay * sy + k * ay * ay
        suv = self.sxy[hi] - self.sxy[lo] - ax * sy - ay * sx + k * ax * ay
        num = dx * dx * svv - 2 * dx * dy * suv + dy * dy * suu
        den = dx * dx + dy * dy
        degenerate = den == 0
        num = np.where(degenerate, suu + svv, num)
        den = np.where(degenerate, 1, den)
        out = num.astype(np.float64) / den.astype(np.float64)
        return out if out.ndim else float(out)

    def sse(self, i: int, j: int) -> float:
        return self.sse_scalar(i, self._span(i, j))

    def split_costs(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        """(candidate indices, combined SSE) for splitting ``i -> j`` at each interior point."""
        span = (j - i) % self.n if self.closed else j - i
        offs = np.arange(1, span)
        left = self.sse_span(np.full(offs.shape, i), offs)
        right = self.sse_span((i + offs) % self.n if self.closed else i + offs, span - offs)
        cand = (i + offs) % self.n if self.closed else i + offs
        return cand, left + right


def polygon_distances(curve: DigitalCurve, vertex_indices) -> np.ndarray:
    """Distance of every curve point to the chord of the polygon side covering it.

    Vertices get 0. Points of an open curve outside the first/last vertex are
    not covered by any side and also get 0.
    """
    n = curve.n
    v = np.asarray(sorted(vertex_indices), dtype=np.int64)
    q = np.arange(n)
    pos = np.searchsorted(v, q, side="right") - 1
    if curve.closed:
        start = v[pos % len(v)]
        end = v[(pos + 1) % len(v)]
        covered = np.ones(n, dtype=bool)
    else:
        covered = (pos >= 0) & (pos < len(v) - 1)
        pos = np.clip(pos, 0, len(v) - 2)
        start, end = v[pos], v[pos + 1]
    pts = curve.points
    a, b = pts[start], pts[end]
    d = b - a
    rel = pts - a
    cross = np.abs(d[:, 0] * rel[:, 1] - d[:, 1] * rel[:, 0]).astype(np.float64)
    norm = np.hypot(d[:, 0], d[:, 1])
    degenerate = norm == 0
    dist = np.where(degenerate, np.hypot(rel[:, 0], rel[:, 1]),
                    cross / np.where(degenerate, 1.0, norm))
    dist[~covered] = 0.0
    return dist
