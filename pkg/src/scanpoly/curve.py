"""Digital curve data model, Freeman chain codes and raster boundary tracing.

All coordinates are integer lattice points in a y-up frame. Chain-code
directions follow the mathematical convention::

    3  2  1
     \\ | /
    4 -- P -- 0
     / | \\
    5  6  7

Raster images are stored y-down (row, column) and flipped on ingestion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from .errors import (
    AmbiguousComponentError,
    CurveFormatError,
    DegenerateCurveError,
    NoComponentError,
)

DIRECTIONS = np.array(
    [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)],
    dtype=np.int64,
)
_CODE_OF_STEP = {(int(dx), int(dy)): k for k, (dx, dy) in enumerate(DIRECTIONS)}


@dataclass(frozen=True, eq=False)
class DigitalCurve:
    """Sequence of 8-connected lattice points, circular when ``closed``.

    ``points`` is stored as a read-only ``(n, 2)`` int64 array.
    """

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.int64).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "closed", bool(self.closed))
        validate_points(pts, self.closed)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    def __getitem__(self, i) -> tuple[int, int]:
        x, y = self.points[i % self.n if self.closed else i]
        return int(x), int(y)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DigitalCurve):
            return NotImplemented
        return self.closed == other.closed and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.closed, self.points.tobytes()))

    def __repr__(self) -> str:
        kind = "closed" if self.closed else "open"
        return f"DigitalCurve(n={self.n}, {kind}, start={self[0]})"

    def as_tuples(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in self.points]

    def reversed(self) -> "DigitalCurve":
        """Traverse in the opposite direction.

        A closed curve keeps index 0 in place (``q[t] = p[-t mod n]``) so that
        both scan directions share a start point; an open curve is flipped.
        """
        if self.closed:
            pts = np.roll(self.points[::-1], 1, axis=0)
        else:
            pts = self.points[::-1]
        return DigitalCurve(pts, self.closed)

    def signed_area2(self) -> int:
        """Twice the signed shoelace area (positive for counter-clockwise)."""
        x, y = self.points[:, 0], self.points[:, 1]
        return int(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class Polygon:
    """Ordered vertex indices into a curve of ``n`` points.

    Indices are kept sorted ascending, which is one valid circular order.
    """

    vertex_indices: tuple[int, ...]
    n: int
    closed: bool = True

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.vertex_indices))
        object.__setattr__(self, "vertex_indices", idx)
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate vertex indices in {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.n):
            raise ValueError(f"vertex index out of range [0, {self.n})")
        if self.closed and len(idx) < 3:
            raise DegenerateCurveError(f"closed polygon needs >= 3 vertices, got {len(idx)}")
        if not self.closed and len(idx) < 2:
            raise DegenerateCurveError("open polygon needs >= 2 vertices")

    @classmethod
    def on(cls, curve: DigitalCurve, indices: Iterable[int]) -> "Polygon":
        return cls(tuple(indices), curve.n, curve.closed)

    @property
    def m(self) -> int:
        return len(self.vertex_indices)

    def __len__(self) -> int:
        return len(self.vertex_indices)

    def __iter__(self):
        return iter(self.vertex_indices)

    def segments(self) -> list[tuple[int, int]]:
        """Consecutive vertex pairs, including the closing side when closed."""
        v = self.vertex_indices
        pairs = list(zip(v[:-1], v[1:]))
        if self.closed:
            pairs.append((v[-1], v[0]))
        return pairs

    def coordinates(self, curve: DigitalCurve) -> np.ndarray:
        return curve.points[list(self.vertex_indices)]


def validate_points(points: np.ndarray, closed: bool) -> None:
    """Raise ``CurveFormatError`` unless ``points`` form a valid digital curve."""
    n = len(points)
    if closed and n < 3:
        raise DegenerateCurveError(f"closed curve needs >= 3 points, got {n}")
    if not closed and n < 2:
        raise DegenerateCurveError(f"open curve needs >= 2 points, got {n}")
    nxt = np.roll(points, -1, axis=0) if closed else points[1:]
    step = np.abs(nxt - points[: len(nxt)])
    cheb = step.max(axis=1)
    bad = np.flatnonzero(cheb != 1)
    if bad.size:
        i = int(bad[0])
        j = (i + 1) % n
        what = "duplicate" if cheb[i] == 0 else "non 8-connected"
        raise CurveFormatError(
            f"{what} consecutive points at indices {i},{j}: "
            f"{tuple(map(int, points[i]))} -> {tuple(map(int, points[j]))}"
        )


def canonicalize(curve: DigitalCurve) -> DigitalCurve:
    """Counter-clockwise orientation, index 0 at the smallest (y, x) point.

    Open curves are returned unchanged.
    """
    if not curve.closed:
        return curve
    pts = curve.points
    if curve.signed_area2() < 0:
        pts = pts[::-1]
    first = int(np.lexsort((pts[:, 0], pts[:, 1]))[0])
    return DigitalCurve(np.roll(pts, -first, axis=0), True)


def decode_chain_code(start: Sequence[int], code, closed: bool | None = None) -> DigitalCurve:
    """Build a curve from a start point and a Freeman chain code.

    Args:
        start: (x, y) of the first point.
        code: digit string or sequence of ints in 0-7.
        closed: force the closed flag. By default the curve is closed when the
            walk returns to ``start`` (the duplicate is dropped) or ends on an
            8-neighbour of it, provided at least 3 points remain. With
            ``closed=False`` every point is kept as walked.
    """
    digits = [_digit(c, pos) for pos, c in enumerate(code)]
    if not digits:
        raise CurveFormatError("empty chain code")
    steps = DIRECTIONS[digits]
    pts = np.vstack([np.asarray(start, dtype=np.int64)[None, :],
                     np.asarray(start, dtype=np.int64) + np.cumsum(steps, axis=0)])
    returns = np.array_equal(pts[-1], pts[0]) and closed is not False
    if returns:
        pts = pts[:-1]
    if closed is None:
        adjacent = np.abs(pts[-1] - pts[0]).max() == 1
        closed = (returns or adjacent) and len(pts) >= 3
        if returns and len(pts) < 3:
            raise CurveFormatError("chain code closes on itself with fewer than 3 points")
    elif closed and not returns and np.abs(pts[-1] - pts[0]).max() != 1:
        raise CurveFormatError("chain code does not close but closed=True was requested")
    return DigitalCurve(pts, closed)


def _digit(c, pos: int) -> int:
    try:
        d = int(c)
    except (TypeError, ValueError):
        raise CurveFormatError(f"invalid chain-code digit {c!r} at position {pos}") from None
    if not 0 <= d <= 7 or (isinstance(c, str) and not c.isdigit()):
        raise CurveFormatError(f"invalid chain-code digit {c!r} at position {pos}")
    return d


def encode_chain_code(curve: DigitalCurve) -> tuple[tuple[int, int], str]:
    """Inverse of :func:`decode_chain_code`; closed curves include the closing step."""
    pts = curve.points
    nxt = np.roll(pts, -1, axis=0) if curve.closed else pts[1:]
    steps = nxt - pts[: len(nxt)]
    code = "".join(str(_CODE_OF_STEP[(int(dx), int(dy))]) for dx, dy in steps)
    return curve[0], code


# clockwise on screen (y-down), starting west
_MOORE = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]
_MOORE_INDEX = {d: k for k, d in enumerate(_MOORE)}


def trace_boundary(raster) -> DigitalCurve:
    """Outer boundary of the single 8-connected foreground component.

    Moore-neighbour tracing with Jacob's stopping criterion. ``raster`` is a
    2-D array (row 0 at the top); any non-zero entry is foreground. The
    result is canonicalized, so it is counter-clockwise in y-up coordinates
    with ``x = column`` and ``y = height - 1 - row``.
    """
    mask = np.asarray(raster) != 0
    if mask.ndim != 2:
        raise CurveFormatError(f"raster must be 2-D, got shape {mask.shape}")
    _, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        raise NoComponentError("raster has no foreground pixels")
    if count > 1:
        raise AmbiguousComponentError(f"raster has {count} foreground components")
    height = mask.shape[0]
    padded = np.pad(mask, 1)
    rows, cols = np.nonzero(padded)
    start = (int(rows[0]), int(cols[0]))

    path = [start]
    p = start
    back = 0  # west of the first raster-order pixel is background
    first_move = None
    while True:
        for s in range(1, 9):
            d = (back + s) % 8
            dr, dc = _MOORE[d]
            if padded[p[0] + dr, p[1] + dc]:
                break
        else:
            raise DegenerateCurveError("isolated single pixel has no boundary curve")
        if p == start and first_move is not None and d == first_move:
            path.pop()
            break
        if first_move is None:
            first_move = d
        q = (p[0] + dr, p[1] + dc)
        pr, pc = _MOORE[(d - 1) % 8]
        back = _MOORE_INDEX[(p[0] + pr - q[0], p[1] + pc - q[1])]
        p = q
        path.append(p)

    rc = np.array(path, dtype=np.int64) - 1
    xy = np.column_stack([rc[:, 1], height - 1 - rc[:, 0]])
    if len(xy) < 3:
        raise DegenerateCurveError(f"boundary has only {len(xy)} points")
    return canonicalize(DigitalCurve(xy, True))


def rasterize_curve(curve: DigitalCurve, fill: bool = True) -> np.ndarray:
    """Render a closed curve back to a y-down boolean raster with a 1-pixel margin."""
    pts = curve.points
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    w, h = (hi - lo + 3).tolist()
    img = np.zeros((h, w), dtype=bool)
    cols = pts[:, 0] - lo[0] + 1
    rows = (hi[1] - pts[:, 1]) + 1
    img[rows, cols] = True
    if fill:
        img = ndimage.binary_fill_holes(img)
    return img
