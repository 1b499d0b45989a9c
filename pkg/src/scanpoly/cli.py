"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 input error, 3 degenerate geometry.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import formats
from .approximator import approximate
from .curve import DigitalCurve, trace_boundary
from .errors import (
    AmbiguousComponentError,
    ClosenessError,
    CostGuardError,
    CurveFormatError,
    DegenerateCurveError,
    NoComponentError,
    ScanPolyError,
)
from .geometry import DegenerateChordError
from .metrics import evaluate
from .mpeg7 import largest_component
from .optimal import full_table, rosin_measure
from .records import BENCH_COLUMNS, SCHEMA_VERSION, median_time_ns, run_curve, time_db
from .svg import CURVE_COLOR, SIDE_COLOR, VERTEX_COLOR, render_svg
from .transforms import robustness_experiment

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3
FORMATS = ("chaincode", "csv", "pbm", "image")


class UsageError(Exception):
    pass


def _emit(text: str, path=None) -> None:
    if path:
        formats.atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _rosin_dict(r) -> dict:
    return {"fidelity": r.fidelity, "efficiency": r.efficiency, "merit": r.merit,
            "e2_opt": r.e2_opt, "m_opt": r.m_opt}


def _rosin(curve, polygon, full: bool, cache_dir=None):
    if full:
        table = full_table(curve, min(curve.n, 3 * polygon.m))
        return rosin_measure(curve, polygon, table)
    return rosin_measure(curve, polygon, cache_dir=cache_dir)


def cmd_approximate(args) -> int:
    curve = formats.load_curve(args.input, args.format)
    record, polygon, trace = run_curve(curve, Path(args.input).stem,
                                       with_rosin=args.record is not None and not args.no_rosin,
                                       cache_dir=args.cache_dir)
    _emit(formats.format_points(polygon.coordinates(curve)), args.output)
    if args.svg:
        formats.atomic_write(args.svg, render_svg(curve, polygon, title=record.curve_id))
    if args.trace:
        formats.write_json(args.trace, {"schema_version": SCHEMA_VERSION, **trace.to_dict()})
        record.trace_path = str(args.trace)
    if args.record:
        formats.write_json(args.record, record.to_dict())
    if not trace.stabilized:
        print(f"warning: {args.input}: not stabilized after {len(trace.per_iteration)} iterations",
              file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    curve = formats.load_curve(args.curve, args.format)
    polygon = formats.polygon_from_points(curve, formats.read_polygon_points(args.polygon))
    out = {"schema_version": SCHEMA_VERSION, "metrics": evaluate(curve, polygon).to_dict()}
    if not args.no_rosin:
        out["rosin"] = _rosin_dict(_rosin(curve, polygon, args.full, args.cache_dir))
    _emit(formats.dumps(out), args.output)
    return EXIT_OK


def cmd_rosin(args) -> int:
    curve = formats.load_curve(args.curve, args.format)
    polygon = formats.polygon_from_points(curve, formats.read_polygon_points(args.polygon))
    out = {"schema_version": SCHEMA_VERSION, **_rosin_dict(_rosin(curve, polygon, args.full, args.cache_dir))}
    _emit(formats.dumps(out), args.output)
    return EXIT_OK


def cmd_robustness(args) -> int:
    curve = formats.load_curve(args.input, args.format)
    report = robustness_experiment(curve, jobs=args.jobs)
    _emit(formats.dumps(report.to_dict()), args.output)
    return EXIT_OK


def _bench_one(path: str, repeats: int, curve_id: str) -> dict:
    curve = formats.load_curve(path)
    ns, poly = median_time_ns(curve, repeats)
    return {"curve_id": curve_id, "n": curve.n, "m": poly.m, "median_ns": ns,
            "time_db": time_db(ns)}


def _bench_safe(path: str, repeats: int, curve_id: str):
    try:
        return _bench_one(path, repeats, curve_id), None
    except (ScanPolyError, OSError) as exc:
        return None, str(exc)


def cmd_bench(args) -> int:
    if args.repeats < 3:
        raise UsageError("--repeats must be >= 3")
    root = Path(args.input_dir)
    if not root.is_dir():
        raise UsageError(f"{root} is not a directory")
    paths = sorted(str(p) for p in root.iterdir() if p.suffix.lower() in formats.CURVE_SUFFIXES)
    if not paths:
        raise UsageError(f"{root} contains no curve files")
    stems = [Path(p).stem for p in paths]
    # ids must be unique within a batch; fall back to the file name on clashes
    ids = [s if stems.count(s) == 1 else Path(p).name for s, p in zip(stems, paths)]
    repeats = [args.repeats] * len(paths)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_safe, paths, repeats, ids))
    else:
        results = list(map(_bench_safe, paths, repeats, ids))
    rows = []
    for path, (row, problem) in zip(paths, results):
        if row is None:
            print(f"skip {path}: {problem}", file=sys.stderr)
        else:
            rows.append(row)
    if not rows:
        raise UsageError(f"no readable curves in {root}")
    rows.sort(key=lambda r: r["curve_id"])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    curve = formats.load_curve(args.curve, args.format)
    if args.polygon:
        polygon = formats.polygon_from_points(curve, formats.read_polygon_points(args.polygon))
    else:
        polygon, _ = approximate(curve)
    svg = render_svg(curve, polygon, scale=args.scale, curve_color=args.curve_color,
                     side_color=args.side_color, vertex_color=args.vertex_color,
                     title=Path(args.curve).stem)
    _emit(svg, args.output)
    return EXIT_OK


def _trace_file(path, largest: bool) -> tuple[DigitalCurve, np.ndarray]:
    suffix = Path(path).suffix.lower()
    mask = formats.read_pbm(path) if suffix == ".pbm" else formats.read_image_mask(path)
    return trace_boundary(largest_component(mask) if largest else mask), mask


def cmd_trace_boundary(args) -> int:
    curve, mask = _trace_file(args.image, args.largest)
    if args.pbm:
        formats.write_pbm(args.pbm, largest_component(mask) if args.largest else mask)
    text = formats.format_chain_code(curve) if args.to == "chaincode" else formats.format_points(curve.points)
    _emit(text, args.output)
    return EXIT_OK


def cmd_mpeg7_convert(args) -> int:
    src, dst = Path(args.src), Path(args.dst)
    if not src.is_dir():
        raise UsageError(f"{src} is not a directory")
    images = sorted(p for p in src.iterdir() if p.suffix.lower() in formats.IMAGE_SUFFIXES)
    if not images:
        raise UsageError(f"{src} contains no images")
    done = 0
    for path in images:
        try:
            curve, mask = _trace_file(path, largest=True)
        except (DegenerateCurveError, NoComponentError) as exc:
            print(f"skip {path.name}: {exc}", file=sys.stderr)
            continue
        formats.write_pbm(dst / f"{path.stem}.pbm", largest_component(mask), plain=False)
        formats.atomic_write(dst / f"{path.stem}.chain", formats.format_chain_code(curve))
        done += 1
    print(f"converted {done}/{len(images)} images into {dst}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scanpoly", description=__doc__.splitlines()[0])
    p.add_argument("--seedless", action="store_true",
                   help="reserved; every command is already deterministic")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_arg(sp, name="input"):
        sp.add_argument(name)
        sp.add_argument("--format", choices=FORMATS, help="input format (default: from suffix)")

    sp = sub.add_parser("approximate", help="approximate a curve by a polygon")
    curve_arg(sp)
    sp.add_argument("-o", "--output", help="polygon CSV (default: stdout)")
    sp.add_argument("--svg", help="write an SVG overlay")
    sp.add_argument("--trace", help="write the approximation trace as JSON")
    sp.add_argument("--record", help="write the run record (metrics, Rosin, timing) as JSON")
    sp.add_argument("--no-rosin", action="store_true", help="skip Rosin's measure in the record")
    sp.add_argument("--cache-dir", help="cache optimal-error tables here")
    sp.set_defaults(func=cmd_approximate)

    for name, func, helptext in (("evaluate", cmd_evaluate, "metrics and Rosin's measure of a polygon"),
                                 ("rosin", cmd_rosin, "Rosin's fidelity, efficiency and merit")):
        sp = sub.add_parser(name, help=helptext)
        curve_arg(sp, "curve")
        sp.add_argument("polygon", help="polygon CSV, one 'x,y' vertex per line")
        sp.add_argument("--full", action="store_true",
                        help="reference the all-starts optimum (n <= 500)")
        sp.add_argument("--cache-dir")
        sp.add_argument("-o", "--output")
        if name == "evaluate":
            sp.add_argument("--no-rosin", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("robustness", help="compactness CoV under rotation and scaling")
    curve_arg(sp)
    sp.add_argument("-o", "--output")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_robustness)

    sp = sub.add_parser("bench", help="median execution time per curve file")
    sp.add_argument("input_dir")
    sp.add_argument("--repeats", type=int, default=5)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("render", help="SVG of a curve and polygon")
    curve_arg(sp, "curve")
    sp.add_argument("--polygon", help="polygon CSV (default: run the approximation)")
    sp.add_argument("-o", "--output")
    sp.add_argument("--scale", type=float, default=4.0)
    sp.add_argument("--curve-color", default=CURVE_COLOR)
    sp.add_argument("--side-color", default=SIDE_COLOR)
    sp.add_argument("--vertex-color", default=VERTEX_COLOR)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("trace-boundary", help="boundary curve of a binary image")
    sp.add_argument("image", help="PBM or any Pillow-readable image")
    sp.add_argument("--to", choices=("chaincode", "csv"), default="chaincode")
    sp.add_argument("--pbm", help="also save the mask as PBM")
    sp.add_argument("--largest", action="store_true", help="keep only the largest component")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_trace_boundary)

    sp = sub.add_parser("mpeg7-convert", help="convert dataset images to PBM + chain code")
    sp.add_argument("src")
    sp.add_argument("dst")
    sp.set_defaults(func=cmd_mpeg7_convert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CurveFormatError, ClosenessError, NoComponentError, AmbiguousComponentError,
            CostGuardError, UsageError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateCurveError, DegenerateChordError) as exc:
        print(f"error: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
