"""Per-curve run records, timing and batch benchmarking."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

from .approximator import ApproximationTrace, approximate
from .curve import DigitalCurve, Polygon
from .metrics import MetricsReport, evaluate
from .optimal import RosinResult, rosin_measure

SCHEMA_VERSION = 1
BENCH_COLUMNS = ("curve_id", "n", "m", "median_ns", "time_db")


def time_db(ns: float) -> float:
    """Execution time on the 10*log10 scale."""
    return 10.0 * math.log10(ns)


@dataclass
class RunRecord:
    curve_id: str
    metrics: MetricsReport
    rosin: RosinResult | None
    wall_time_ns: int
    trace_path: str | None = None
    stabilized: bool = True

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "curve_id": self.curve_id,
            "metrics": self.metrics.to_dict(),
            "rosin": None,
            "wall_time_ns": self.wall_time_ns,
            "time_db": time_db(self.wall_time_ns),
            "trace_path": self.trace_path,
            "stabilized": self.stabilized,
        }
        if self.rosin is not None:
            out["rosin"] = {"fidelity": self.rosin.fidelity, "efficiency": self.rosin.efficiency,
                            "merit": self.rosin.merit, "e2_opt": self.rosin.e2_opt,
                            "m_opt": self.rosin.m_opt}
        if not self.stabilized:
            out["warning"] = "approximation did not stabilize within the iteration cap"
        return out


def run_curve(curve: DigitalCurve, curve_id: str, with_rosin: bool = True,
              cache_dir=None) -> tuple[RunRecord, Polygon, ApproximationTrace]:
    t0 = time.perf_counter_ns()
    polygon, trace = approximate(curve)
    elapsed = max(1, time.perf_counter_ns() - t0)
    rosin = rosin_measure(curve, polygon, cache_dir=cache_dir) if with_rosin else None
    record = RunRecord(curve_id, evaluate(curve, polygon), rosin, elapsed,
                       stabilized=trace.stabilized)
    return record, polygon, trace


def median_time_ns(curve: DigitalCurve, repeats: int = 5) -> tuple[int, Polygon]:
    if repeats < 3:
        raise ValueError("need at least 3 repeats")
    samples = []
    polygon = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        polygon, _ = approximate(curve)
        samples.append(max(1, time.perf_counter_ns() - t0))
    return int(statistics.median(samples)), polygon


def bench(curves: dict[str, DigitalCurve], repeats: int = 5) -> list[dict]:
    """Median wall time per curve, rows sorted by curve id."""
    rows = []
    for cid in sorted(curves):
        curve = curves[cid]
        ns, poly = median_time_ns(curve, repeats)
        rows.append({"curve_id": cid, "n": curve.n, "m": poly.m, "median_ns": ns,
                     "time_db": time_db(ns)})
    return rows


def curve_id_for(path) -> str:
    return Path(path).stem
