"""Runtime of approximate() on digitized circles of growing length.

    python scripts/scaling_bench.py --sizes 500 1000 2000 4000 10000
"""

import argparse
import math

from scanpoly.records import median_time_ns, time_db
from scanpoly.shapes import disk


def circle_with_length(n: int):
    # boundary length grows like 4*sqrt(2)*r; nudge the radius to land near n
    r = n / (4 * math.sqrt(2))
    c = disk(r)
    for _ in range(30):
        if abs(c.n - n) <= max(4, n // 500):
            break
        r *= n / c.n
        c = disk(r)
    return c


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 1000, 2000, 4000, 10000])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)
    print("n,m,median_ns,time_db,ns_per_point,ratio_to_previous")
    prev = None
    for n in args.sizes:
        c = circle_with_length(n)
        ns, poly = median_time_ns(c, args.repeats)
        ratio = "" if prev is None else f"{ns / prev:.2f}"
        print(f"{c.n},{poly.m},{ns},{time_db(ns):.3f},{ns / c.n:.1f},{ratio}")
        prev = ns


if __name__ == "__main__":
    main()
