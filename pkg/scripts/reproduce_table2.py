"""Per-curve merit, execution time and compactness CoV, as in the benchmark table.

With --mpeg7 DIR the reference curves found in DIR are used and compared to the
published values; otherwise the synthetic fixture family is run.

    python scripts/reproduce_table2.py --mpeg7 ~/data/mpeg7 -o table2.csv
"""

import argparse
import csv
import sys

import numpy as np

from scanpoly.optimal import rosin_measure
from scanpoly.records import median_time_ns, time_db
from scanpoly.shapes import fixture_family
from scanpoly.transforms import robustness_experiment


def load(args):
    if not args.mpeg7:
        return fixture_family(), {}
    from scanpoly.mpeg7 import REFERENCE, find_files, load_shape

    files = find_files(args.mpeg7, instance=args.instance)
    missing = sorted(set(REFERENCE) - set(files))
    if missing:
        print(f"{len(missing)} reference curves not found: {', '.join(missing)}", file=sys.stderr)
    return {name: load_shape(path) for name, path in sorted(files.items())}, REFERENCE


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mpeg7", help="directory of extracted MPEG-7 images")
    ap.add_argument("--instance", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)

    curves, reference = load(args)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.writer(out)
    w.writerow(["curve", "n", "m", "merit", "time_ns", "time_db", "cov_percent",
                "ref_merit", "ref_time_ns", "ref_cov"])
    merits, covs = [], []
    for name, c in curves.items():
        ns, poly = median_time_ns(c, args.repeats)
        merit = rosin_measure(c, poly).merit
        cov = robustness_experiment(c, jobs=args.jobs).cov_percent
        merits.append(merit)
        covs.append(cov)
        ref = reference.get(name, ("", "", ""))
        w.writerow([name, c.n, poly.m, f"{merit:.5f}", ns, f"{time_db(ns):.3f}", f"{cov:.6f}", *ref])
    print(f"mean merit {np.mean(merits):.4f}, mean CoV {np.nanmean(covs):.6f} over {len(merits)} curves",
          file=sys.stderr)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
