"""Unsupervised polygonal approximation of digital curves.

Pipeline: sharp turnings from a bidirectional length scan, greedy vertex
insertion while ``f = m + E2`` decreases, guarded merging of weak vertices,
then hill-climbing vertex adjustment. Merging and adjustment repeat until
WE2 and WEinf stop changing.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .curve import DigitalCurve, Polygon
from .errors import DegenerateCurveError
from .geometry import ChordCosts, distance_sq, max_distance_sq, polygon_distances, seg_length

MAX_ITERATIONS = 50
STATIONARY_RTOL = 1e-9
# float pre-screen width before falling back to exact rational comparison
_NEAR = 1e-9


@dataclass
class ScanState:
    anchor: int
    cursor: int
    best_len: int  # squared length |p_anchor p_cursor|^2


@dataclass(frozen=True)
class IterationRecord:
    polygon: Polygon
    e2: float
    einf: float
    we2: float
    weinf: float


@dataclass
class ApproximationTrace:
    initial_vertices: Polygon
    after_insertion: Polygon
    delta: float
    insertion_f: list[float] = field(default_factory=list)
    per_iteration: list[IterationRecord] = field(default_factory=list)
    final: Polygon | None = None
    stabilized: bool = False

    def to_dict(self) -> dict:
        return {
            "initial_vertices": list(self.initial_vertices.vertex_indices),
            "after_insertion": list(self.after_insertion.vertex_indices),
            "delta": self.delta,
            "insertion_f": list(self.insertion_f),
            "per_iteration": [
                {"vertices": list(r.polygon.vertex_indices), "e2": r.e2, "einf": r.einf,
                 "we2": r.we2, "weinf": r.weinf}
                for r in self.per_iteration
            ],
            "final": list(self.final.vertex_indices) if self.final else None,
            "stabilized": self.stabilized,
        }


# ---------------------------------------------------------------------------
# initial segmentation


def scan_pass(curve: DigitalCurve, direction: str = "forward") -> set[int]:
    """Sharp turnings found by one scan of the curve.

    A growing chord is anchored at the current start point; when moving the
    far end one step shortens the chord, the point just passed is a sharp
    turning and becomes the new anchor. On a closed curve scanning wraps past
    the end until a turning repeats. Returned indices refer to ``curve``
    regardless of direction.
    """
    if direction not in ("forward", "reverse"):
        raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")
    n = curve.n
    work = curve.reversed() if direction == "reverse" else curve
    found = _scan(work.points[:, 0].tolist(), work.points[:, 1].tolist(), curve.closed)
    if direction == "reverse":
        found = [(-k) % n if curve.closed else n - 1 - k for k in found]
    if curve.closed and not found:
        found = list(diameter_pair(curve))
    return set(found)


def _scan(xs: list[int], ys: list[int], closed: bool) -> list[int]:
    n = len(xs)
    found: list[int] = []
    if not closed:
        found.extend([0, n - 1])
        limit = n - 1
    else:
        # a detection happens within one lap of any anchor, and a lap of
        # anchors revisits a turning; 3 laps bounds the pathological drift
        limit = 3 * n
    seen = set(found)
    st = ScanState(0, 1, (xs[1] - xs[0]) ** 2 + (ys[1] - ys[0]) ** 2)
    while st.cursor < limit:
        nxt = (st.cursor + 1) % n
        ax, ay = xs[st.anchor % n], ys[st.anchor % n]
        length = (xs[nxt] - ax) ** 2 + (ys[nxt] - ay) ** 2
        if length < st.best_len:
            k = st.cursor % n
            if k in seen:
                if closed:
                    break
            else:
                seen.add(k)
                found.append(k)
            st.anchor = st.cursor
            st.cursor += 1
            c = st.cursor % n
            st.best_len = (xs[c] - xs[k]) ** 2 + (ys[c] - ys[k]) ** 2
        else:
            st.cursor += 1
            st.best_len = length
    return found


def diameter_pair(curve: DigitalCurve) -> tuple[int, int]:
    """Indices of two curve points at maximal distance (smallest index pair on ties)."""
    pts = curve.points
    try:
        cand = np.unique(ConvexHull(pts).vertices)
    except (QhullError, ValueError):
        cand = np.arange(len(pts))
    # earliest index per distinct hull point
    sub = pts[cand].astype(np.float64)
    d2 = ((sub[:, None, :] - sub[None, :, :]) ** 2).sum(axis=2)
    a, b = np.unravel_index(int(np.argmax(d2)), d2.shape)
    pa, pb = pts[cand[a]], pts[cand[b]]
    ia = int(np.flatnonzero((pts == pa).all(axis=1))[0])
    ib = int(np.flatnonzero((pts == pb).all(axis=1))[0])
    return (ia, ib) if ia < ib else (ib, ia)


def _fallback_seed(curve: DigitalCurve) -> set[int]:
    a, b = diameter_pair(curve)
    pa, pb = curve.points[a], curve.points[b]
    d = pb - pa
    rel = curve.points - pa
    dist = np.abs(d[0] * rel[:, 1] - d[1] * rel[:, 0]).astype(np.float64)
    dist[[a, b]] = -1.0
    return {a, b, int(np.argmax(dist))}


def initial_segmentation(curve: DigitalCurve) -> Polygon:
    verts = scan_pass(curve, "forward") | scan_pass(curve, "reverse")
    if curve.closed and len(verts) < 3:
        verts |= _fallback_seed(curve)
    return Polygon.on(curve, verts)


# ---------------------------------------------------------------------------
# vertex insertion


def split_segment(curve: DigitalCurve, i: int, j: int, costs: ChordCosts | None = None) -> int | None:
    """Interior index minimising the summed SSE of the two sub-chords, or None.

    Ties, decided in exact arithmetic, go to the smallest offset from ``i``.
    """
    costs = costs or ChordCosts(curve)
    cand, total = costs.split_costs(i, j)
    if cand.size == 0:
        return None
    lo = float(total.min())
    near = np.flatnonzero(total <= lo + _NEAR * max(1.0, abs(lo)))
    if near.size == 1:
        return int(cand[near[0]])
    exact = [costs.sse_exact(i, int(cand[t])) + costs.sse_exact(int(cand[t]), j) for t in near]
    best = min(range(len(exact)), key=exact.__getitem__)
    return int(cand[near[best]])


def insert_vertices(curve: DigitalCurve, polygon: Polygon, costs: ChordCosts | None = None,
                    history: list | None = None) -> tuple[Polygon, float]:
    """Split the worst segment while ``m + E2`` keeps decreasing.

    Returns the refined polygon and ``delta``, its maximum error. When
    ``history`` is given, the heuristic value before any insertion and after
    every accepted insertion is appended to it.
    """
    refined, delta_sq = _insert(curve, polygon, costs or ChordCosts(curve), history)
    return refined, math.sqrt(delta_sq)


def _insert(curve: DigitalCurve, polygon: Polygon, costs: ChordCosts,
            history: list | None) -> tuple[Polygon, Fraction]:
    verts = list(polygon.vertex_indices)
    segs = list(zip(verts[:-1], verts[1:]))
    if curve.closed:
        segs.append((verts[-1], verts[0]))

    # segments keyed by exact squared max error, ties to the smaller start index
    seg_max: dict[int, Fraction] = {}
    heap = []
    e2 = 0.0
    for i, j in segs:
        e2 += costs.sse(i, j)
        seg_max[i] = max_distance_sq(curve, i, j)
        heap.append((-seg_max[i], i, j))
    heapq.heapify(heap)
    m = len(verts)
    if history is not None:
        history.append(m + e2)

    added = []
    while heap:
        neg, i, j = heapq.heappop(heap)
        if neg == 0:
            break
        k = split_segment(curve, i, j, costs)
        if k is None:
            break
        # f drops iff the split removes more than one unit of squared error
        gain = costs.sse_exact(i, j) - costs.sse_exact(i, k) - costs.sse_exact(k, j)
        if not gain > 1:
            heapq.heappush(heap, (neg, i, j))
            break
        m += 1
        e2 += costs.sse(i, k) + costs.sse(k, j) - costs.sse(i, j)
        added.append(k)
        for a, b in ((i, k), (k, j)):
            seg_max[a] = max_distance_sq(curve, a, b)
            heapq.heappush(heap, (-seg_max[a], a, b))
        if history is not None:
            history.append(m + e2)

    refined = Polygon.on(curve, verts + added)
    return refined, max(seg_max.values(), default=Fraction(0))


# ---------------------------------------------------------------------------
# merging


def _line_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx == 0 and dy == 0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs(dx * (p[1] - a[1]) - dy * (p[0] - a[0])) / math.hypot(dx, dy)


def vertex_error(curve: DigitalCurve, polygon: Polygon, j: int) -> float:
    """Distance of the ``j``-th polygon vertex from the chord joining its neighbours."""
    v = polygon.vertex_indices
    m = len(v)
    if m < 3:
        raise DegenerateCurveError("vertex error needs at least 3 vertices")
    return _line_distance(curve[v[j]], curve[v[(j - 1) % m]], curve[v[(j + 1) % m]])


def vertex_strength(curve: DigitalCurve, polygon: Polygon, j: int) -> float:
    """Summed length of the two sides meeting at the ``j``-th vertex."""
    v = polygon.vertex_indices
    m = len(v)
    p = curve[v[j]]
    return seg_length(curve[v[(j - 1) % m]], p) + seg_length(p, curve[v[(j + 1) % m]])


def merge_pass(curve: DigitalCurve, polygon: Polygon, delta: float,
               delta_sq: Fraction | None = None) -> Polygon:
    """Delete weak vertices whose removal keeps every other vertex clear of the new chord.

    The weakest unconsidered vertex is deleted when its error is below
    ``delta`` and all other vertices lie farther than ``delta`` from the
    line joining its neighbours. Neighbours of a deleted vertex get fresh
    errors and become candidates again. Comparisons against ``delta`` are
    exact; pass ``delta_sq`` to give the threshold as an exact square,
    otherwise the float ``delta`` is taken at face value.
    """
    verts = list(polygon.vertex_indices)
    m = len(verts)
    closed = curve.closed
    min_m = 3 if closed else 2
    if m <= min_m:
        return polygon
    thr = Fraction(delta) ** 2 if delta_sq is None else Fraction(delta_sq)
    delta = math.sqrt(thr)

    coords = curve.points[verts]
    pts = coords.astype(np.float64)
    prev = [(t - 1) % m for t in range(m)]
    nxt = [(t + 1) % m for t in range(m)]
    alive = np.ones(m, dtype=bool)
    live = m
    fixed = set() if closed else {0, m - 1}

    def err(t):
        return distance_sq(coords[t], coords[prev[t]], coords[nxt[t]])

    def clear_of_chord(u, t, w) -> bool:
        others = alive.copy()
        others[[u, t, w]] = False
        if not others.any():
            return True
        a, b = pts[u], pts[w]
        d = b - a
        rel = pts[others] - a
        norm = math.hypot(d[0], d[1])
        if norm == 0:
            dist = np.hypot(rel[:, 0], rel[:, 1])
        else:
            dist = np.abs(d[0] * rel[:, 1] - d[1] * rel[:, 0]) / norm
        if (dist < delta * (1 - _NEAR) - _NEAR).any():
            return False
        close = np.flatnonzero(others)[dist <= delta * (1 + _NEAR) + _NEAR]
        return all(distance_sq(coords[s], coords[u], coords[w]) > thr for s in close)

    current = {}
    heap = []
    for t in range(m):
        if t in fixed:
            continue
        current[t] = err(t)
        heap.append((current[t], verts[t], t))
    heapq.heapify(heap)
    considered = set()

    while heap:
        e, _, t = heapq.heappop(heap)
        if not alive[t] or t in considered or current.get(t) != e:
            continue
        considered.add(t)
        if not e < thr:
            break  # heap is ordered: nothing left can pass the threshold
        if live <= min_m:
            break
        u, w = prev[t], nxt[t]
        if not clear_of_chord(u, t, w):
            continue
        alive[t] = False
        live -= 1
        nxt[u], prev[w] = w, u
        for s in (u, w):
            if s in fixed:
                continue
            considered.discard(s)
            current[s] = err(s)
            heapq.heappush(heap, (current[s], verts[s], s))

    return Polygon.on(curve, [verts[t] for t in range(m) if alive[t]])


# ---------------------------------------------------------------------------
# vertex adjustment


def adjust_vertices(curve: DigitalCurve, polygon: Polygon, costs: ChordCosts | None = None) -> Polygon:
    """Slide each vertex along the curve while the SSE of its two sides drops.

    Vertices are visited once in circular order starting from the strongest.
    Each visit moves the vertex by single curve steps, never onto a
    neighbouring vertex, and accepts only strict improvements (decided in
    exact arithmetic).
    """
    costs = costs or ChordCosts(curve)
    verts = list(polygon.vertex_indices)
    m = len(verts)
    n = curve.n
    closed = curve.closed
    if m < 3:
        return polygon
    strengths = np.array([vertex_strength(curve, polygon, t) for t in range(m)])
    # sums of square roots: treat values within rounding of the maximum as tied
    top = strengths.max()
    first = int(np.flatnonzero(strengths >= top - _NEAR * top)[0])

    def cost(u, v, w):
        return costs.sse_exact(u, v) + costs.sse_exact(v, w)

    for step in range(m):
        t = (first + step) % m
        if not closed and t in (0, m - 1):
            continue
        u, v, w = verts[t - 1], verts[t], verts[(t + 1) % m]
        best = cost(u, v, w)
        while True:
            move = None
            for cand in ((v - 1) % n, (v + 1) % n) if closed else (v - 1, v + 1):
                if cand == u or cand == w:
                    continue
                c = cost(u, cand, w)
                if c < (best if move is None else move[1]):
                    move = (cand, c)
            if move is None:
                break
            v, best = move
        verts[t] = v
    return Polygon.on(curve, verts)


# ---------------------------------------------------------------------------
# full pipeline


def approximate(curve: DigitalCurve, max_iter: int = MAX_ITERATIONS,
                rtol: float = STATIONARY_RTOL) -> tuple[Polygon, ApproximationTrace]:
    if curve.closed and curve.n < 8:
        raise DegenerateCurveError(f"curve too short to approximate (n={curve.n} < 8)")
    costs = ChordCosts(curve)
    initial = initial_segmentation(curve)
    history: list[float] = []
    inserted, delta_sq = _insert(curve, initial, costs, history)
    delta = math.sqrt(delta_sq)
    trace = ApproximationTrace(initial, inserted, delta, history)

    poly = inserted
    previous = None
    for _ in range(max_iter):
        poly = merge_pass(curve, poly, delta, delta_sq)
        poly = adjust_vertices(curve, poly, costs)
        rec = _record(curve, poly)
        trace.per_iteration.append(rec)
        if previous is not None and math.isclose(rec.we2, previous.we2, rel_tol=rtol) \
                and math.isclose(rec.weinf, previous.weinf, rel_tol=rtol):
            trace.stabilized = True
            break
        previous = rec
    trace.final = poly
    return poly, trace


def _record(curve: DigitalCurve, poly: Polygon) -> IterationRecord:
    d = polygon_distances(curve, poly.vertex_indices)
    e2, einf = float(np.sum(d * d)), float(d.max())
    cr = curve.n / poly.m
    return IterationRecord(poly, e2, einf, e2 / cr**2, einf / cr)
