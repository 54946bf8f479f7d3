"""Sweep header size and max group size over seeded micro instances.

Writes one CSV row per (instance, hs, Smax) cell and prints how often the
optimum is monotone along each axis.

    python3 scripts/hs_smax_sweep.py --count 20 --out sweep.csv
"""
import argparse
import csv
import sys

from tt_grouper.benchmark import sweep
from tt_grouper.search import SolveLimits
from tt_grouper.suites import micro_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--hs", default="0,1,2,3")
    ap.add_argument("--smax-offsets", default="3,5,8,1000000",
                    help="added to the largest proc of each instance")
    ap.add_argument("--method", default="exact")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    hs_values = [int(v) for v in args.hs.split(",")]
    offsets = [int(v) for v in args.smax_offsets.split(",")]
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["instance", "hs", "smax", "cmax", "lower", "upper", "optimal"])
    breaks = 0
    for i, inst in enumerate(micro_suite(args.count, args.start), start=args.start):
        pmax = max(t.proc for t in inst.tasks)
        smax_values = [pmax + o for o in offsets]
        cells = sweep(inst, hs_values, smax_values, args.method, SolveLimits(time_limit=None))
        grid = {(c.header_size, c.max_group_size): c.cmax for c in cells}
        for c in cells:
            writer.writerow([f"micro-{i}", c.header_size, c.max_group_size, c.cmax, c.lower,
                             c.upper, int(c.optimal)])
        for hs in hs_values:
            col = [grid[hs, s] for s in smax_values]
            breaks += col != sorted(col, reverse=True)
        for s in smax_values:
            row = [grid[h, s] for h in hs_values]
            breaks += row != sorted(row)
    if out is not sys.stdout:
        out.close()
    print(f"monotonicity breaks: {breaks}", file=sys.stderr)
    return 0 if breaks == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
