"""Independent reference implementations used as test oracles.

Everything here is plain Python over coordinate tuples, deliberately sharing
no code with the package beyond the curve container.
"""

from __future__ import annotations

import math
from fractions import Fraction


def line_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx == 0 and dy == 0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs(dx * (p[1] - a[1]) - dy * (p[0] - a[0])) / math.hypot(dx, dy)


def line_distance_sq(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    rx, ry = p[0] - a[0], p[1] - a[1]
    if dx == 0 and dy == 0:
        return Fraction(rx * rx + ry * ry)
    return Fraction((dx * ry - dy * rx) ** 2, dx * dx + dy * dy)


def chord_sse_exact(pts, i, j) -> Fraction:
    n = len(pts)
    total = Fraction(0)
    k = (i + 1) % n
    while k != j % n:
        total += line_distance_sq(pts[k], pts[i], pts[j % n])
        k = (k + 1) % n
    return total


def chord_max_sq(pts, i, j) -> Fraction:
    n = len(pts)
    best = Fraction(0)
    k = (i + 1) % n
    while k != j % n:
        best = max(best, line_distance_sq(pts[k], pts[i], pts[j % n]))
        k = (k + 1) % n
    return best


def chord_sse(pts, i, j) -> float:
    """Sum of squared distances of the points strictly between i and j (circular)."""
    n = len(pts)
    total = 0.0
    k = (i + 1) % n
    while k != j % n:
        total += line_distance(pts[k], pts[i], pts[j % n]) ** 2
        k = (k + 1) % n
    return total


def chord_max(pts, i, j) -> float:
    n = len(pts)
    best = 0.0
    k = (i + 1) % n
    while k != j % n:
        best = max(best, line_distance(pts[k], pts[i], pts[j % n]))
        k = (k + 1) % n
    return best


def polygon_e2(pts, verts, closed=True) -> float:
    sides = list(zip(verts[:-1], verts[1:]))
    if closed:
        sides.append((verts[-1], verts[0]))
    return sum(chord_sse(pts, a, b) for a, b in sides)


def polygon_einf(pts, verts, closed=True) -> float:
    sides = list(zip(verts[:-1], verts[1:]))
    if closed:
        sides.append((verts[-1], verts[0]))
    return max(chord_max(pts, a, b) for a, b in sides)


def cost_table(pts) -> list[list[float]]:
    """cost[a][b] = chord SSE from offset a to offset b (a < b <= n) relative to index 0."""
    n = len(pts)
    return [[chord_sse(pts, a % n, b % n) if b > a else 0.0 for b in range(n + 1)]
            for a in range(n + 1)]


def brute_min_eps(pts, m: int, start: int = 0) -> float:
    """Exhaustive search over vertex subsets containing ``start``.

    Depth-first with pruning on the running sum, which is exact because
    every chord cost is non-negative.
    """
    n = len(pts)
    rot = [pts[(start + t) % n] for t in range(n)]
    cost = cost_table(rot)
    best = [math.inf]

    def walk(last, used, acc):
        if acc >= best[0]:
            return
        if used == m:
            total = acc + cost[last][n]
            if total < best[0]:
                best[0] = total
            return
        # leave room for the remaining vertices
        for nxt in range(last + 1, n - (m - used) + 1):
            walk(nxt, used + 1, acc + cost[last][nxt])

    walk(0, 1, 0.0)
    return best[0]


def brute_global_min_eps(pts, m: int) -> float:
    return min(brute_min_eps(pts, m, s) for s in range(len(pts)))


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_box(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a, b, c, d) -> bool:
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and _on_box(a, b, c)) or (o2 == 0 and _on_box(a, b, d))
            or (o3 == 0 and _on_box(c, d, a)) or (o4 == 0 and _on_box(c, d, b)))


def is_simple_polygon(vertices) -> bool:
    """Exhaustive segment-pair test; adjacent sides may only share their common vertex."""
    v = [tuple(int(c) for c in p) for p in vertices]
    m = len(v)
    if len(set(v)) != m:
        return False
    for i in range(m):
        a, b = v[i], v[(i + 1) % m]
        for j in range(i + 1, m):
            c, d = v[j], v[(j + 1) % m]
            if j == i + 1 or (i == 0 and j == m - 1):
                # adjacent sides: fail only if they fold back onto each other
                shared, p, q = (b, a, d) if j == i + 1 else (a, b, c)
                dot = (p[0] - shared[0]) * (q[0] - shared[0]) + (p[1] - shared[1]) * (q[1] - shared[1])
                if _orient(p, shared, q) == 0 and dot > 0:
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


# -- reference versions of the approximation phases -------------------------

def scan_turnings(pts, closed=True) -> list[int]:
    """Sharp turnings by the shrinking-chord rule, scanning forward from index 0."""
    n = len(pts)

    def d2(a, b):
        pa, pb = pts[a % n], pts[b % n]
        return (pa[0] - pb[0]) ** 2 + (pa[1] - pb[1]) ** 2

    found = [] if closed else [0, n - 1]
    anchor, k = 0, 1
    end = 3 * n if closed else n - 1
    while k < end:
        if d2(anchor, k + 1) < d2(anchor, k):
            if k % n in found:
                if closed:
                    break
            else:
                found.append(k % n)
            anchor = k
        k += 1
    return found


def greedy_insert(pts, verts, closed=True):
    """Split the side of largest maximum error at its best point while m + E2 drops.

    All comparisons are exact. Returns (vertices, f history, delta squared).
    """
    n = len(pts)
    verts = sorted(verts)

    def sides(vs):
        out = list(zip(vs[:-1], vs[1:]))
        if closed:
            out.append((vs[-1], vs[0]))
        return out

    def span(a, b):
        return (b - a) % n if closed else b - a

    def e2(vs):
        return sum((chord_sse_exact(pts, a, b) for a, b in sides(vs)), Fraction(0))

    f = len(verts) + e2(verts)
    history = [f]
    while True:
        worst = max(sides(verts), key=lambda s: (chord_max_sq(pts, *s), -s[0]))
        if chord_max_sq(pts, *worst) == 0:
            break
        a, b = worst
        cands = [(a + t) % n for t in range(1, span(a, b))]
        k = min(cands, key=lambda c: (chord_sse_exact(pts, a, c) + chord_sse_exact(pts, c, b),
                                      span(a, c)))
        trial = sorted(verts + [k])
        f_new = len(trial) + e2(trial)
        if not f_new < f:
            break
        verts, f = trial, f_new
        history.append(f)
    delta_sq = max(chord_max_sq(pts, a, b) for a, b in sides(verts))
    return verts, [float(h) for h in history], delta_sq


def merge(pts, verts, delta_sq):
    """Naive merge pass: rescan every live vertex each round (exact arithmetic)."""
    live = sorted(verts)
    considered = set()
    while len(live) > 3:
        m = len(live)

        def err(t):
            return line_distance_sq(pts[live[t]], pts[live[t - 1]], pts[live[(t + 1) % m]])

        pool = [t for t in range(m) if live[t] not in considered]
        if not pool:
            break
        t = min(pool, key=lambda t: (err(t), live[t]))
        if not err(t) < delta_sq:
            break
        considered.add(live[t])
        a, b = pts[live[t - 1]], pts[live[(t + 1) % m]]
        others = [live[s] for s in range(m) if s not in ((t - 1) % m, t, (t + 1) % m)]
        if all(line_distance_sq(pts[o], a, b) > delta_sq for o in others):
            considered.discard(live[t - 1])
            considered.discard(live[(t + 1) % m])
            del live[t]
    return live


def adjust(pts, verts):
    """One sweep of single-step hill climbing, strongest vertex first."""
    n = len(pts)
    v = sorted(verts)
    m = len(v)

    def length(a, b):
        return math.hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1])

    strength = [length(v[t - 1], v[t]) + length(v[t], v[(t + 1) % m]) for t in range(m)]
    top = max(strength)
    first = min(t for t in range(m) if strength[t] >= top - 1e-9 * top)
    for step in range(m):
        t = (first + step) % m
        u, w = v[t - 1], v[(t + 1) % m]
        cur = v[t]
        best = chord_sse_exact(pts, u, cur) + chord_sse_exact(pts, cur, w)
        while True:
            move = None
            for c in ((cur - 1) % n, (cur + 1) % n):
                if c in (u, w):
                    continue
                cost = chord_sse_exact(pts, u, c) + chord_sse_exact(pts, c, w)
                if cost < (best if move is None else move[0]):
                    move = (cost, c)
            if move is None:
                break
            best, cur = move
        v[t] = cur
    return sorted(v)


def rotate_round(pts, theta_degrees, center):
    """Rotate with complex arithmetic and round half away from zero."""
    w = complex(math.cos(math.radians(theta_degrees)), math.sin(math.radians(theta_degrees)))
    if theta_degrees % 90 == 0:
        w = complex(round(w.real), round(w.imag))
    c = complex(*center)
    out = []
    for x, y in pts:
        z = c + (complex(x, y) - c) * w
        out.append(tuple(int(math.copysign(math.floor(abs(v) + 0.5), v)) for v in (z.real, z.imag)))
    return out


def minor_axis_error(p, q, r):
    """Distance of ``r`` from segment ``pq`` measured along the minor axis."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    if abs(dx) >= abs(dy):
        return abs(p[1] + dy * Fraction(r[0] - p[0], dx) - r[1])
    return abs(p[0] + dx * Fraction(r[1] - p[1], dy) - r[0])
