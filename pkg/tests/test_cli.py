import csv
import io
import json
import math
import os
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from scanpoly import formats
from scanpoly.cli import main
from scanpoly.curve import canonicalize, rasterize_curve, trace_boundary
from scanpoly.records import BENCH_COLUMNS, median_time_ns, time_db
from scanpoly.shapes import disk, polygon_mask, rectangle, square

GOLDEN = Path(__file__).parent / "golden"
SVG_NS = "{http://www.w3.org/2000/svg}"


def schema_of(obj):
    """Structure of a JSON document: keys and value types, not values."""
    if isinstance(obj, dict):
        return {k: schema_of(v) for k, v in sorted(obj.items())}
    if isinstance(obj, list):
        return [schema_of(obj[0])] if obj else []
    if isinstance(obj, bool):
        return "bool"
    if isinstance(obj, (int, float)):
        return "number"
    if obj is None:
        return "null"
    if obj in ("inf", "-inf", "nan"):
        return "number"
    return "string"


def check_golden(name, doc):
    path = GOLDEN / f"{name}.json"
    if os.environ.get("SCANPOLY_REGOLD"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(json.dumps(schema_of(doc), indent=2, sort_keys=True) + "\n")
    assert schema_of(doc) == json.loads(path.read_text())


@pytest.fixture
def square_csv(tmp_path):
    path = tmp_path / "square.csv"
    path.write_text("x,y\n" + formats.format_points(square(6).points))
    return path


@pytest.fixture
def disk_chain(tmp_path):
    path = tmp_path / "disk.chain"
    path.write_text(formats.format_chain_code(disk(9)))
    return path


@pytest.fixture
def apple_pbm(tmp_path):
    # a disc with a bite out of its top and a short stalk
    x, y = np.meshgrid(np.arange(-24, 25), -np.arange(-24, 25))
    body = x**2 + y**2 <= 18**2
    bite = (x - 4) ** 2 + (y - 20) ** 2 <= 6**2
    stalk = (abs(x) <= 1) & (y >= 15) & (y <= 22)
    path = tmp_path / "apple.pbm"
    formats.write_pbm(path, (body & ~bite) | stalk)
    return path


def run(argv, capsys):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


# -- approximate ----------------------------------------------------------------

def test_approximate_square_gives_four_corners(square_csv, tmp_path, capsys):
    svg = tmp_path / "out.svg"
    rc, out, _ = run(["approximate", square_csv, "--svg", svg], capsys)
    assert rc == 0
    assert sorted(formats.parse_points(out)) == [(0, 0), (0, 6), (6, 0), (6, 6)]
    root = ET.parse(svg).getroot()
    assert len(root.findall(f"{SVG_NS}circle")) == 4


def test_approximate_writes_polygon_file(disk_chain, tmp_path, capsys):
    out_csv = tmp_path / "poly.csv"
    rc, out, _ = run(["approximate", disk_chain, "-o", out_csv], capsys)
    assert rc == 0 and out == ""
    pts = formats.read_polygon_points(out_csv)
    curve = formats.load_curve(disk_chain)
    assert set(pts) <= set(curve.as_tuples())


def test_bad_digit_exit_code_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.chain"
    bad.write_text("# start\n0 0\n0129\n")
    rc, _, err = run(["approximate", bad], capsys)
    assert rc == 2
    assert "bad.chain:3" in err and "'9'" in err


def test_unknown_suffix_is_input_error(tmp_path, capsys):
    p = tmp_path / "curve.xyz"
    p.write_text("0 0\n0246\n")
    assert run(["approximate", p], capsys)[0] == 2
    assert run(["approximate", p, "--format", "chaincode"], capsys)[0] == 3  # n=4 is too short


def test_missing_file_is_input_error(tmp_path, capsys):
    assert run(["approximate", tmp_path / "nope.csv"], capsys)[0] == 2


def test_degenerate_curve_exit_code(tmp_path, capsys):
    p = tmp_path / "tiny.chain"
    p.write_text("0 0\n0246\n")
    rc, _, err = run(["approximate", p], capsys)
    assert rc == 3 and "degenerate" in err


def test_record_and_trace_golden(apple_pbm, tmp_path, capsys):
    rec, tr = tmp_path / "rec.json", tmp_path / "trace.json"
    rc, _, _ = run(["approximate", apple_pbm, "--record", rec, "--trace", tr], capsys)
    assert rc == 0
    record = json.loads(rec.read_text())
    trace = json.loads(tr.read_text())
    check_golden("record", record)
    check_golden("trace", trace)
    assert record["curve_id"] == "apple"
    assert record["trace_path"] == str(tr)
    assert record["wall_time_ns"] > 0
    assert all(v is not None for v in record["metrics"].values())
    assert 0 < record["rosin"]["merit"] <= 100
    assert trace["stabilized"] is True and trace["schema_version"] == 1


def test_record_without_rosin(square_csv, tmp_path, capsys):
    rec = tmp_path / "rec.json"
    run(["approximate", square_csv, "--record", rec, "--no-rosin"], capsys)
    doc = json.loads(rec.read_text())
    assert doc["rosin"] is None
    assert doc["metrics"]["fom"] == "inf"


def test_approximate_is_deterministic(apple_pbm, capsys):
    first = run(["approximate", apple_pbm], capsys)[1]
    assert run(["approximate", apple_pbm], capsys)[1] == first


# -- evaluate / rosin -------------------------------------------------------------

def test_evaluate_all_points_polygon(disk_chain, tmp_path, capsys):
    curve = formats.load_curve(disk_chain)
    poly = tmp_path / "all.csv"
    poly.write_text(formats.format_points(curve.points))
    rc, out, _ = run(["evaluate", disk_chain, poly], capsys)
    doc = json.loads(out)
    assert rc == 0
    assert doc["metrics"]["e2"] == 0 and doc["metrics"]["cr"] == 1
    check_golden("evaluate", doc)


def test_evaluate_approx_optimal_polygon_has_merit_100(disk_chain, tmp_path, capsys):
    from scanpoly.optimal import approx_table

    curve = formats.load_curve(disk_chain)
    table = approx_table(curve, min(curve.n, 18))
    poly = tmp_path / "opt.csv"
    poly.write_text(formats.format_points(table.polygon(6).coordinates(curve)))
    rc, out, _ = run(["rosin", disk_chain, poly], capsys)
    assert rc == 0
    assert json.loads(out)["merit"] == pytest.approx(100, abs=1e-6)


def test_evaluate_off_curve_vertex(square_csv, tmp_path, capsys):
    poly = tmp_path / "p.csv"
    poly.write_text("0,0\n6,0\n3,3\n")
    rc, _, err = run(["evaluate", square_csv, poly], capsys)
    assert rc == 2 and "(3, 3)" in err


def test_evaluate_full_reference_guard(tmp_path, capsys):
    big = tmp_path / "big.chain"
    big.write_text(formats.format_chain_code(rectangle(200, 60)))
    poly = tmp_path / "p.csv"
    poly.write_text("0,0\n200,0\n200,60\n0,60\n")
    assert run(["rosin", big, poly, "--full"], capsys)[0] == 2
    rc, out, _ = run(["rosin", big, poly], capsys)
    assert rc == 0 and json.loads(out)["merit"] == 100


def test_evaluate_accepts_clockwise_vertex_list(square_csv, tmp_path, capsys):
    poly = tmp_path / "p.csv"
    poly.write_text("0,0\n0,6\n6,6\n6,0\n")
    rc, out, _ = run(["evaluate", square_csv, poly, "--no-rosin"], capsys)
    assert rc == 0 and json.loads(out)["metrics"]["m"] == 4


def test_rosin_cache_dir(disk_chain, tmp_path, capsys):
    poly = tmp_path / "p.csv"
    curve = formats.load_curve(disk_chain)
    poly.write_text(formats.format_points(curve.points[::7]))
    cache = tmp_path / "cache"
    a = run(["rosin", disk_chain, poly, "--cache-dir", cache], capsys)[1]
    assert any(cache.iterdir())
    assert run(["rosin", disk_chain, poly, "--cache-dir", cache], capsys)[1] == a


# -- robustness ---------------------------------------------------------------------

def test_robustness_square_has_18_entries(tmp_path, capsys):
    p = tmp_path / "square20.csv"
    p.write_text(formats.format_points(square(20).points))
    rc, out, _ = run(["robustness", p, "--jobs", 2], capsys)
    doc = json.loads(out)
    assert rc == 0 and len(doc["variants"]) == 18 and doc["partial"] is False
    check_golden("robustness", doc)


def test_robustness_partial(tmp_path, capsys):
    p = tmp_path / "tiny.csv"
    p.write_text(formats.format_points(square(2).points))
    doc = json.loads(run(["robustness", p], capsys)[1])
    assert doc["partial"] is True and "scale0.2" in doc["skipped"]


# -- bench --------------------------------------------------------------------------

def test_time_db():
    assert time_db(1e7) == 70.0


def test_bench_csv(tmp_path, capsys):
    d = tmp_path / "curves"
    d.mkdir()
    for name, c in (("b_disk", disk(10)), ("a_rect", rectangle(9, 4))):
        (d / f"{name}.chain").write_text(formats.format_chain_code(c))
    (d / "junk.chain").write_text("not a curve\n")
    rc, out, err = run(["bench", d, "--repeats", 3], capsys)
    assert rc == 0 and "skip" in err and "junk" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == BENCH_COLUMNS
    assert [r["curve_id"] for r in rows] == ["a_rect", "b_disk"]
    for r in rows:
        assert float(r["time_db"]) == pytest.approx(10 * math.log10(int(r["median_ns"])))


@pytest.mark.parametrize("argv_tail", [["--repeats", "2"], []])
def test_bench_usage_errors(tmp_path, capsys, argv_tail):
    empty = tmp_path / "empty"
    empty.mkdir()
    if argv_tail:
        (empty / "s.chain").write_text(formats.format_chain_code(square(4)))
    assert run(["bench", empty, *argv_tail], capsys)[0] == 2


def test_bench_duplicate_stems_get_distinct_ids(tmp_path, capsys):
    d = tmp_path / "curves"
    d.mkdir()
    (d / "s.chain").write_text(formats.format_chain_code(square(5)))
    (d / "s.csv").write_text(formats.format_points(square(5).points))
    rows = list(csv.DictReader(io.StringIO(run(["bench", d, "--repeats", 3], capsys)[1])))
    assert sorted(r["curve_id"] for r in rows) == ["s.chain", "s.csv"]


def test_median_repeats_stable():
    # medians of 3 and 5 runs on the same curve agree loosely; generous bound for shared CI boxes
    c = disk(60)
    t3, _ = median_time_ns(c, 3)
    t5, _ = median_time_ns(c, 5)
    assert 0.2 < t3 / t5 < 5


# -- render / trace-boundary / formats ------------------------------------------------

def test_render_svg_structure(disk_chain, capsys):
    rc, out, _ = run(["render", disk_chain, "--vertex-color", "black"], capsys)
    assert rc == 0
    root = ET.fromstring(out)
    path = root.find(f"{SVG_NS}path")
    circles = root.findall(f"{SVG_NS}circle")
    points = path.get("d").replace("M", "").split("L")
    assert len(points) == len(circles) + 1
    assert points[0].strip() == points[-1].strip()
    assert {c.get("fill") for c in circles} == {"black"}
    assert root.find(f"{SVG_NS}polyline").get("stroke") == "red"
    assert path.get("stroke") == "blue"


def test_trace_boundary_command(apple_pbm, tmp_path, capsys):
    rc, out, _ = run(["trace-boundary", apple_pbm], capsys)
    assert rc == 0
    curve = formats.parse_chain_code(out)
    assert curve == formats.load_curve(apple_pbm)
    rc, out, _ = run(["trace-boundary", apple_pbm, "--to", "csv"], capsys)
    assert formats.parse_points(out) == curve.as_tuples()


def test_trace_boundary_largest(tmp_path, capsys):
    img = np.zeros((20, 20), dtype=bool)
    img[2:10, 2:10] = True
    img[14:16, 14:16] = True
    p = tmp_path / "two.pbm"
    formats.write_pbm(p, img)
    assert run(["trace-boundary", p], capsys)[0] == 2
    rc, out, _ = run(["trace-boundary", p, "--largest"], capsys)
    assert rc == 0 and formats.parse_chain_code(out).n == 28


@pytest.mark.parametrize("plain", [True, False])
def test_pbm_round_trip(tmp_path, plain):
    rng = np.random.default_rng(7)
    mask = rng.random((13, 21)) > 0.5
    p = tmp_path / "m.pbm"
    formats.write_pbm(p, mask, plain=plain)
    assert np.array_equal(formats.read_pbm(p), mask)


def test_image_input_via_pillow(tmp_path, capsys):
    from PIL import Image

    mask = rasterize_curve(disk(12))
    p = tmp_path / "disk.png"
    Image.fromarray((mask * 255).astype(np.uint8)).save(p)
    curve = formats.load_curve(p)
    assert curve.n == disk(12).n
    assert run(["approximate", p], capsys)[0] == 0


def test_csv_points_header_and_comments():
    pts = formats.parse_points("x,y\n# comment\n1,2\n3, 4 # trailing\n")
    assert pts == [(1, 2), (3, 4)]


def test_json_non_finite_values():
    assert json.loads(formats.dumps({"a": math.inf, "b": [1.0, -math.inf]})) == {"a": "inf", "b": [1.0, "-inf"]}


def test_mpeg7_convert(tmp_path, capsys):
    from PIL import Image

    src = tmp_path / "src"
    src.mkdir()
    for name, c in (("apple-1", disk(15)), ("bone-1", canonicalize(trace_boundary(polygon_mask(
            [(-12, -3), (12, -3), (12, 3), (-12, 3)]))))):
        Image.fromarray((rasterize_curve(c) * 255).astype(np.uint8)).save(src / f"{name}.gif")
    Image.fromarray(np.zeros((5, 5), dtype=np.uint8)).save(src / "blank-1.gif")
    dst = tmp_path / "dst"
    rc, _, err = run(["mpeg7-convert", src, dst], capsys)
    assert rc == 0 and "skip blank-1.gif" in err
    assert sorted(p.name for p in dst.iterdir()) == ["apple-1.chain", "apple-1.pbm",
                                                      "bone-1.chain", "bone-1.pbm"]
    assert formats.load_curve(dst / "apple-1.chain") == formats.load_curve(dst / "apple-1.pbm")


def test_console_script_entry_point(square_csv):
    proc = subprocess.run([sys.executable, "-m", "scanpoly.cli", "approximate", str(square_csv)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 4
