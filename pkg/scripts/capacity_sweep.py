#!/usr/bin/env python3
"""Sweep the (B1,T1,B2,T2) grid and tabulate region, capacity and bounds.

Writes one CSV row per normalized feasible point; exact rationals rendered
as p/q.  Example:

    python3 scripts/capacity_sweep.py --max 8 --out capacity_sweep.csv
"""

import argparse
import csv
import sys
from fractions import Fraction

from burstfec.musco import (
    MulticastParams,
    capacity,
    classify,
    upper_bound_cu,
    upper_bound_pec,
)


def frac(x):
    if x is None:
        return "UNKNOWN"
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=8)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["b1", "t1", "b2", "t2", "region", "capacity", "pec_bound", "cu_bound"])
    n = 0
    for b1 in range(1, args.max + 1):
        for t1 in range(b1, args.max + 1):
            for b2 in range(b1, args.max + 1):
                for t2 in range(b2, args.max + 1):
                    p = MulticastParams(b1, t1, b2, t2)
                    writer.writerow(
                        [b1, t1, b2, t2, classify(p).value,
                         frac(capacity(p).capacity), frac(upper_bound_pec(p)),
                         frac(upper_bound_cu(p))]
                    )
                    n += 1
    if fh is not sys.stdout:
        fh.close()
        print(f"wrote {n} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
