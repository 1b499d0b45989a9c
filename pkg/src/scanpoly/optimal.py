"""Min-epsilon dynamic programming baseline and Rosin's fidelity/efficiency/merit.

``dp_min_eps`` fixes one start vertex and solves the min-epsilon problem
exactly over (position, sides used) states. ``full_optimal`` repeats it
from every start (cubic cost); ``approx_optimal`` uses a single heuristic
start, the curve point farthest from the centroid.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .curve import DigitalCurve, Polygon
from .errors import CostGuardError
from .geometry import ChordCosts
from .metrics import approximation_errors

FULL_OPTIMAL_MAX_N = 500
EFFICIENCY_RTOL = 1e-9
_ROW_BLOCK = 512


@dataclass
class OptimalErrorTable:
    """Optimal E2 for every side count ``m = 1..m_max`` from one start.

    ``exact_e2[m]`` is the least total E2 of a polygon with exactly ``m``
    vertices, one at ``start_index``. That sequence need not decrease with
    ``m``: an extra vertex changes which chords cover which points. Rosin's
    measure uses ``opt_e2``, the running minimum from ``m = 3`` on, i.e. the
    best polygon with at most ``m`` vertices.

    ``back[s, j]`` is the predecessor position of position ``j`` when ``s``
    sides have been used. Positions are offsets from the start (position
    ``n`` is the start again). ``back`` is None for tables reduced over
    several starts.
    """

    start_index: Optional[int]
    n: int
    exact_e2: np.ndarray
    back: Optional[np.ndarray] = None

    @property
    def m_max(self) -> int:
        return len(self.exact_e2) - 1

    @property
    def opt_e2(self) -> np.ndarray:
        out = self.exact_e2.copy()
        if len(out) > 3:
            out[3:] = np.minimum.accumulate(out[3:])
        return out

    def best_count(self, m: int) -> int:
        """Smallest vertex count in ``3..m`` attaining ``opt_e2[m]``."""
        self._check(m)
        if m < 3:
            return m
        seg = self.exact_e2[3:m + 1]
        return 3 + int(np.flatnonzero(seg <= seg.min())[0])

    def polygon(self, m: int) -> Polygon:
        """Optimal polygon with at most ``m`` vertices."""
        return self.exact_polygon(self.best_count(m))

    def exact_polygon(self, m: int) -> Polygon:
        """Optimal polygon with exactly ``m`` vertices."""
        if self.back is None:
            raise ValueError("table has no backpointers")
        self._check(m)
        pos = []
        j = self.n
        for s in range(m, 0, -1):
            j = int(self.back[s, j])
            pos.append(j)
        return Polygon(tuple((self.start_index + p) % self.n for p in pos), self.n)

    def _check(self, m: int) -> None:
        if not 1 <= m <= self.m_max:
            raise ValueError(f"m={m} outside table range 1..{self.m_max}")

    def min_sides(self, e2: float, rtol: float = EFFICIENCY_RTOL, m_min: int = 3) -> Optional[int]:
        """Least ``m >= m_min`` whose optimal error does not exceed ``e2``."""
        limit = e2 * (1.0 + rtol) + 1e-12
        ok = np.flatnonzero(self.exact_e2[m_min:] <= limit)
        return int(ok[0]) + m_min if ok.size else None


def _cost_matrix(costs: ChordCosts, start: int) -> np.ndarray:
    """``C[i, j]`` = SSE of the chord between positions ``i < j`` (inf elsewhere)."""
    n = costs.n
    size = n + 1
    C = np.full((size, size), np.inf)
    cols = np.arange(size)
    for r0 in range(0, size, _ROW_BLOCK):
        rows = np.arange(r0, min(size, r0 + _ROW_BLOCK))
        span = cols[None, :] - rows[:, None]
        valid = span >= 1
        ii = np.broadcast_to((start + rows[:, None]) % n, span.shape)[valid]
        C[r0:r0 + len(rows)][valid] = costs.sse_span(ii, span[valid])
    return C


def build_table(curve: DigitalCurve, start: int, m_max: int,
                costs: ChordCosts | None = None) -> OptimalErrorTable:
    """Solve the min-epsilon DP from ``start`` for all side counts up to ``m_max``."""
    if not curve.closed:
        raise ValueError("optimal baseline is defined for closed curves")
    n = curve.n
    if not 0 <= start < n:
        raise ValueError(f"start {start} outside [0, {n})")
    if not 1 <= m_max <= n:
        raise ValueError(f"m_max={m_max} must lie in 1..n={n}")
    costs = costs or ChordCosts(curve)
    C = _cost_matrix(costs, start)
    back = np.zeros((m_max + 1, n + 1), dtype=np.int32)
    opt = np.full(m_max + 1, np.inf)
    D = C[0].copy()
    opt[1] = D[n]
    for s in range(2, m_max + 1):
        total = D[:, None] + C
        arg = np.argmin(total, axis=0)
        D = total[arg, np.arange(n + 1)]
        back[s] = arg
        opt[s] = D[n]
    return OptimalErrorTable(start, n, opt, back)


def dp_min_eps(curve: DigitalCurve, m: int, start: int) -> tuple[Polygon, float]:
    """Least-E2 polygon with exactly ``m`` vertices, one of them at ``start``."""
    if m > curve.n:
        raise ValueError(f"m={m} exceeds curve length n={curve.n}")
    if m < 3:
        raise ValueError("closed polygon needs m >= 3")
    table = build_table(curve, start, m)
    return table.exact_polygon(m), float(table.exact_e2[m])


def full_optimal(curve: DigitalCurve, m: int, force: bool = False) -> tuple[Polygon, float]:
    """Globally optimal min-epsilon polygon (every start tried). Cubic in n."""
    _guard(curve, force)
    costs = ChordCosts(curve)
    best = None
    for s in range(curve.n):
        table = build_table(curve, s, m, costs)
        e2 = float(table.exact_e2[m])
        if best is None or e2 < best[1]:
            best = (table.exact_polygon(m), e2)
    return best


def full_table(curve: DigitalCurve, m_max: int, force: bool = False) -> OptimalErrorTable:
    """Element-wise minimum of the per-start tables (no backpointers)."""
    _guard(curve, force)
    costs = ChordCosts(curve)
    opt = None
    for s in range(curve.n):
        t = build_table(curve, s, m_max, costs).exact_e2
        opt = t if opt is None else np.minimum(opt, t)
    return OptimalErrorTable(None, curve.n, opt)


def _guard(curve: DigitalCurve, force: bool) -> None:
    if curve.n > FULL_OPTIMAL_MAX_N and not force:
        raise CostGuardError(
            f"full optimal search on n={curve.n} > {FULL_OPTIMAL_MAX_N} points; pass force=True"
        )


def approx_start(curve: DigitalCurve) -> int:
    """Curve point farthest from the centroid (smallest index on ties)."""
    pts = curve.points.astype(np.float64)
    d2 = ((pts - pts.mean(axis=0)) ** 2).sum(axis=1)
    return int(np.argmax(d2))


def approx_optimal(curve: DigitalCurve, m: int) -> tuple[Polygon, float]:
    return dp_min_eps(curve, m, approx_start(curve))


def approx_table(curve: DigitalCurve, m_max: int, cache_dir: str | Path | None = None) -> OptimalErrorTable:
    start = approx_start(curve)
    if cache_dir is None:
        return build_table(curve, start, m_max)
    return cached_table(curve, start, m_max, cache_dir)


def curve_key(curve: DigitalCurve) -> str:
    h = hashlib.sha256()
    h.update(b"closed" if curve.closed else b"open")
    h.update(np.ascontiguousarray(curve.points, dtype="<i8").tobytes())
    return h.hexdigest()[:32]


def cached_table(curve: DigitalCurve, start: int, m_max: int, cache_dir: str | Path) -> OptimalErrorTable:
    """On-disk memo of :func:`build_table`; a cached table with larger ``m_max`` is reused."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"{curve_key(curve)}_{start}.npz"
    if path.exists():
        with np.load(path) as data:
            if len(data["exact_e2"]) - 1 >= m_max:
                return OptimalErrorTable(start, curve.n, data["exact_e2"], data["back"])
    table = build_table(curve, start, m_max)
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, exact_e2=table.exact_e2, back=table.back)
    tmp.replace(path)
    return table


class RosinResult(NamedTuple):
    fidelity: float
    efficiency: float
    merit: float
    e2: float
    m: int
    e2_opt: float
    m_opt: int


def rosin_measure(curve: DigitalCurve, polygon: Polygon, table: OptimalErrorTable | None = None,
                  cache_dir: str | Path | None = None) -> RosinResult:
    """Fidelity, efficiency and merit (percent) of ``polygon`` against an optimal table.

    By default the table is the single-start approximate optimum with
    ``m_max = min(n, 3 m)``. Any table covering ``m`` suffices: the optimum
    with at most ``m`` sides never exceeds the polygon's own error, so the
    efficiency search ends at or below ``m``.
    """
    e2, _ = approximation_errors(curve, polygon)
    m = polygon.m
    n = curve.n
    if table is None:
        table = approx_table(curve, min(n, 3 * m), cache_dir)
    if table.m_max < m:
        raise ValueError(f"table covers m <= {table.m_max}, polygon has m={m}")
    e_opt = float(table.opt_e2[m])
    if e2 > 0:
        fidelity = 100.0 * e_opt / e2
    else:
        fidelity = 100.0 if e_opt <= 1e-9 else math.inf
    m_opt = table.min_sides(e2)
    if m_opt is None:
        raise ValueError("polygon error is below the tabulated optimum; wrong table?")
    efficiency = 100.0 * m_opt / m
    return RosinResult(fidelity, efficiency, math.sqrt(fidelity * efficiency), e2, m, e_opt, m_opt)
