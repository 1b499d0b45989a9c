"""Readers and writers for chain-code text, point CSV, PBM rasters and polygons.

Chain-code file::

    <x> <y>
    <digits 0-7>

Point CSV: one ``x,y`` integer pair per line (closed curve implied). Blank
lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .curve import DigitalCurve, Polygon, canonicalize, decode_chain_code, encode_chain_code, trace_boundary
from .errors import ClosenessError, CurveFormatError

CHAIN_SUFFIXES = {".chain", ".cc", ".fcc", ".txt"}
CSV_SUFFIXES = {".csv"}
PBM_SUFFIXES = {".pbm"}
IMAGE_SUFFIXES = {".gif", ".png", ".bmp", ".jpg", ".jpeg", ".tif", ".tiff"}
CURVE_SUFFIXES = CHAIN_SUFFIXES | CSV_SUFFIXES | PBM_SUFFIXES | IMAGE_SUFFIXES


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_chain_code(text: str, source: str = "<string>") -> DigitalCurve:
    lines = list(_content_lines(text))
    if len(lines) < 2:
        raise CurveFormatError(f"{source}: expected start line and code line")
    (l1, start_line), (l2, code_line) = lines[0], lines[1]
    parts = start_line.replace(",", " ").split()
    try:
        start = tuple(int(p) for p in parts)
    except ValueError:
        raise CurveFormatError(f"{source}:{l1}: start must be two integers, got {start_line!r}") from None
    if len(start) != 2:
        raise CurveFormatError(f"{source}:{l1}: start must be two integers, got {start_line!r}")
    code = "".join(code_line.split())
    for pos, ch in enumerate(code):
        if ch not in "01234567":
            raise CurveFormatError(
                f"{source}:{l2}: invalid chain-code digit {ch!r} at column {pos + 1}")
    try:
        return decode_chain_code(start, code)
    except CurveFormatError as exc:
        raise CurveFormatError(f"{source}:{l2}: {exc}") from None


def read_chain_code(path) -> DigitalCurve:
    return parse_chain_code(Path(path).read_text(), str(path))


def format_chain_code(curve: DigitalCurve) -> str:
    (x, y), code = encode_chain_code(curve)
    return f"{x} {y}\n{code}\n"


def parse_points(text: str, source: str = "<string>") -> list[tuple[int, int]]:
    pts = []
    for lineno, line in _content_lines(text):
        parts = line.replace(";", ",").split(",")
        if len(parts) != 2:
            if lineno == 1 and not any(ch.isdigit() for ch in line):
                continue  # header row
            raise CurveFormatError(f"{source}:{lineno}: expected 'x,y', got {line!r}")
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            if lineno == 1 and not any(ch.isdigit() for ch in line):
                continue
            raise CurveFormatError(f"{source}:{lineno}: non-integer coordinate in {line!r}") from None
    return pts


def read_points_csv(path) -> DigitalCurve:
    pts = parse_points(Path(path).read_text(), str(path))
    if not pts:
        raise CurveFormatError(f"{path}: no points")
    return DigitalCurve(pts, closed=True)


def format_points(points) -> str:
    return "".join(f"{int(x)},{int(y)}\n" for x, y in points)


def read_pbm(path) -> np.ndarray:
    """PBM (plain P1 or raw P4) as a boolean array; 1/black is foreground."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise CurveFormatError(f"{path}: not a PBM file (magic {magic!r})")
    # header tokens: magic, width, height, with comments
    tokens = []
    pos = 2
    while len(tokens) < 2:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise CurveFormatError(f"{path}: truncated PBM header")
        tokens.append(int(data[start:pos]))
    width, height = tokens
    if magic == b"P4":
        pos += 1
        row_bytes = (width + 7) // 8
        raw = np.frombuffer(data[pos:pos + row_bytes * height], dtype=np.uint8)
        if raw.size != row_bytes * height:
            raise CurveFormatError(f"{path}: truncated P4 raster")
        bits = np.unpackbits(raw.reshape(height, row_bytes), axis=1)[:, :width]
        return bits.astype(bool)
    body = data[pos:].decode("ascii", errors="replace")
    body = "\n".join(line.split("#", 1)[0] for line in body.splitlines())
    digits = [c for c in body if c in "01"]
    if len(digits) < width * height:
        raise CurveFormatError(f"{path}: P1 raster has {len(digits)} pixels, expected {width * height}")
    return np.array(digits[: width * height], dtype=np.uint8).reshape(height, width).astype(bool)


def write_pbm(path, raster, plain: bool = True) -> None:
    mask = np.asarray(raster) != 0
    h, w = mask.shape
    if plain:
        rows = "\n".join(" ".join("1" if v else "0" for v in row) for row in mask)
        atomic_write(path, f"P1\n{w} {h}\n{rows}\n")
    else:
        packed = np.packbits(mask.astype(np.uint8), axis=1)
        atomic_write(path, f"P4\n{w} {h}\n".encode() + packed.tobytes())


def read_image_mask(path) -> np.ndarray:
    """Any Pillow-readable image; pixels brighter than mid-grey are foreground."""
    from PIL import Image

    with Image.open(path) as img:
        arr = np.asarray(img.convert("L"))
    return arr > 127


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in CHAIN_SUFFIXES:
        return "chaincode"
    if suffix in CSV_SUFFIXES:
        return "csv"
    if suffix in PBM_SUFFIXES:
        return "pbm"
    if suffix in IMAGE_SUFFIXES:
        return "image"
    raise CurveFormatError(f"{path}: cannot infer format from suffix {suffix!r}; pass --format")


def load_curve(path, fmt: str | None = None) -> DigitalCurve:
    """Read a curve in any supported format and canonicalize it."""
    fmt = fmt or detect_format(path)
    if fmt == "chaincode":
        curve = read_chain_code(path)
    elif fmt == "csv":
        curve = read_points_csv(path)
    elif fmt == "pbm":
        curve = trace_boundary(read_pbm(path))
    elif fmt == "image":
        curve = trace_boundary(read_image_mask(path))
    else:
        raise CurveFormatError(f"unknown format {fmt!r}")
    return canonicalize(curve)


def read_polygon_points(path) -> list[tuple[int, int]]:
    pts = parse_points(Path(path).read_text(), str(path))
    if not pts:
        raise CurveFormatError(f"{path}: polygon has no vertices")
    return pts


def polygon_from_points(curve: DigitalCurve, points) -> Polygon:
    """Map vertex coordinates to curve indices, enforcing closeness and order.

    Boundaries that revisit a pixel have several candidate indices; the
    first one past the previous vertex (walking forward) is taken.
    """
    where: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(curve.as_tuples()):
        where.setdefault(p, []).append(i)
    points = [(int(p[0]), int(p[1])) for p in points]
    try:
        return _map_vertices(curve, points, where)
    except CurveFormatError:
        # vertices listed against the curve's orientation
        return _map_vertices(curve, points[:1] + points[:0:-1], where)


def _map_vertices(curve, points, where) -> Polygon:
    n = curve.n
    chosen = []
    for k, p in enumerate(points):
        if p not in where:
            raise ClosenessError(f"vertex {k} at {p} is not a point of the curve")
        cands = where[p]
        if not chosen:
            chosen.append(cands[0])
            continue
        ref = chosen[-1]
        chosen.append(min(cands, key=lambda i: (i - ref) % n or n))
    # circular order: offsets from the first vertex must increase
    offsets = [(i - chosen[0]) % n for i in chosen]
    if any(b <= a for a, b in zip(offsets, offsets[1:])):
        raise CurveFormatError("polygon vertices are not in curve order")
    if len(set(chosen)) != len(chosen):
        raise CurveFormatError("polygon repeats a vertex")
    return Polygon.on(curve, chosen)


def atomic_write(path, content) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(content, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_safe(obj):
    """Replace non-finite floats by the strings ``"inf"``, ``"-inf"``, ``"nan"``."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return json_safe(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(json_safe(obj), indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    atomic_write(path, dumps(obj))
