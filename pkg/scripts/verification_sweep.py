#!/usr/bin/env python3
"""Construct and exhaustively verify every constructible multicast point.

Each point runs both users' single-burst sweeps over a 4*memory window.
Trials are independent, so they fan out over a process pool; results are
collected and written in deterministic parameter order.

    python3 scripts/verification_sweep.py --max 8 --jobs 4 --out verify.csv
"""

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor

from burstfec.channel_sim import UserSpec, verify_deadlines
from burstfec.musco import MulticastParams, capacity, classify, constructible, construct


def check_point(args):
    b1, t1, b2, t2 = args
    p = MulticastParams(b1, t1, b2, t2)
    spec = construct(p)
    window = 4 * max(spec.memory, 1)
    r1 = verify_deadlines(spec, UserSpec(p.b1, p.t1), window)
    r2 = verify_deadlines(spec, UserSpec(p.b2, p.t2), window)
    rate_ok = spec.rate == capacity(p).capacity
    return (
        (b1, t1, b2, t2),
        classify(p).value,
        str(spec.rate),
        rate_ok and r1.passed and r2.passed,
        r1.trials + r2.trials,
    )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    points = [
        (b1, t1, b2, t2)
        for b1 in range(1, args.max + 1)
        for t1 in range(b1, args.max + 1)
        for b2 in range(b1, args.max + 1)
        for t2 in range(b2, args.max + 1)
        if constructible(MulticastParams(b1, t1, b2, t2))
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(check_point, points, chunksize=8))
    else:
        results = [check_point(pt) for pt in points]

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["b1", "t1", "b2", "t2", "region", "rate", "verdict", "trials"])
    failures = 0
    for (pt, region, rate_s, ok, trials) in results:
        writer.writerow([*pt, region, rate_s, "PASS" if ok else "FAIL", trials])
        failures += 0 if ok else 1
    if fh is not sys.stdout:
        fh.close()
    print(f"{len(points)} points, {failures} failures", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
