"""Command-line front end: classify, capacity tables, build, verify, pec.

Exit codes: 0 success, 2 verification failure, 3 open-capacity refusal,
4 invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .algebra import GF2, GF256
from .channel_sim import UserSpec, make_periodic, run_pec, verify_deadlines
from .code_model import spec_to_text
from .musco import (
    MulticastParams,
    NonIntegerAlphaError,
    Region,
    UnknownRegionError,
    capacity,
    classify,
    construct,
    construct_ia_sco,
    region_inequalities,
    upper_bound_cu,
    upper_bound_pec,
)
from .sco import InfeasibleParamsError, ScoParams, construct_sco

EXIT_OK = 0
EXIT_VERIFY_FAIL = 2
EXIT_OPEN_CAPACITY = 3
EXIT_INVALID = 4

_FIELDS = {"gf2": GF2, "gf256": GF256}


def _frac(x) -> str:
    if x is None:
        return "UNKNOWN"
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _params(args) -> MulticastParams:
    return MulticastParams(args.b1, args.t1, args.b2, args.t2).normalized()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_classify(args) -> int:
    p = _params(args)
    region = classify(p)
    lines = [f"params B1={p.b1} T1={p.t1} B2={p.b2} T2={p.t2}"]
    lines.append(f"region: {region.value}")
    if region is Region.A_PRIME:
        lines.append("interference-avoidance eligible (T2 >= (alpha+1) T1, integer alpha)")
    if region is Region.F_INTERIOR:
        lines.append("capacity open")
    lines.extend(region_inequalities(p))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _capacity_row(p: MulticastParams):
    res = capacity(p)
    return (
        p.b1,
        p.t1,
        p.b2,
        p.t2,
        classify(p).value,
        _frac(res.capacity),
        _frac(upper_bound_pec(p)),
        _frac(upper_bound_cu(p)),
        _frac(res.upper_bound),
        res.achieving_construction or "",
    )


def cmd_capacity(args) -> int:
    header = ("b1", "t1", "b2", "t2", "region", "capacity", "pec_bound", "cu_bound",
              "best_bound", "construction")
    if not args.sweep and (args.b2 is None or args.t2 is None):
        print("error: capacity needs --b2/--t2 or --sweep", file=sys.stderr)
        return EXIT_INVALID
    if args.sweep:
        n = args.sweep
        rows = []
        for b1 in range(1, n + 1):
            for t1 in range(b1, n + 1):
                for b2 in range(b1, n + 1):
                    for t2 in range(b2, n + 1):
                        rows.append(_capacity_row(MulticastParams(b1, t1, b2, t2)))
    else:
        rows = [_capacity_row(_params(args))]
    if args.format == "json":
        keys = header
        _emit(args, json.dumps([dict(zip(keys, r)) for r in rows], indent=2) + "\n")
    else:
        _emit(args, _csv_text(header, rows))
    return EXIT_OK


def _build_spec(args):
    field = _FIELDS[args.field] if args.field else None
    if args.b2 is None:
        return construct_sco(ScoParams(args.b1, args.t1), field)
    p = _params(args)
    if args.method == "ia-sco":
        return construct_ia_sco(p, field)
    return construct(p, field)


def cmd_build(args) -> int:
    try:
        spec = _build_spec(args)
    except UnknownRegionError as exc:
        print(f"error: capacity open: {exc}", file=sys.stderr)
        return EXIT_OPEN_CAPACITY
    except (NonIntegerAlphaError, InfeasibleParamsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, spec_to_text(spec))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        spec = _build_spec(args)
    except UnknownRegionError as exc:
        print(f"error: capacity open: {exc}", file=sys.stderr)
        return EXIT_OPEN_CAPACITY
    except (NonIntegerAlphaError, InfeasibleParamsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    window = args.window or 4 * max(spec.memory, 1)
    users = [UserSpec(args.b1, args.t1)]
    if args.b2 is not None:
        users.append(UserSpec(args.b2, args.t2))
    rows = []
    failed = False
    for idx, user in enumerate(users, start=1):
        res = verify_deadlines(spec, user, window)
        if res.passed:
            rows.append((idx, user.burst, user.delay, "PASS", "", "", ""))
            print(f"user {idx} (B={user.burst}, T={user.delay}): PASS ({res.trials} trials)")
        else:
            failed = True
            ce = res.counterexample
            rows.append(
                (idx, user.burst, user.delay, "FAIL",
                 ce.burst_start, ce.burst_length, f"s{ce.symbol[1]}[{ce.symbol[0]}]")
            )
            print(
                f"user {idx} (B={user.burst}, T={user.delay}): FAIL at burst start "
                f"{ce.burst_start} length {ce.burst_length}, symbol {ce.symbol}"
            )
    if args.out:
        _emit(args, _csv_text(
            ("user", "burst", "delay", "verdict", "ce_start", "ce_length", "ce_symbol"),
            rows,
        ))
    return EXIT_VERIFY_FAIL if failed else EXIT_OK


_PEC_AUTO = {
    Region.A: "multicast_caseA",
    Region.A_PRIME: "multicast_caseA",
    Region.B: "multicast_caseA",
    Region.C: "multicast_caseB",
    Region.D: "multicast_caseB",
    Region.E: "region_e",
    Region.F_T1_EQ_B1: "region_f1",
    Region.F_T2_EQ_B2: "region_f_T2B2",
}


def cmd_pec(args) -> int:
    try:
        if args.b2 is None:
            spec = construct_sco(ScoParams(args.b1, args.t1))
            pattern = make_periodic("single_user", (args.b1, args.t1))
            double_rule = None
        else:
            p = _params(args)
            variant = args.variant
            if variant == "auto":
                region = classify(p)
                if region not in _PEC_AUTO:
                    print(f"error: no periodic schedule for region {region.value}", file=sys.stderr)
                    return EXIT_INVALID
                variant = _PEC_AUTO[region]
                if variant == "multicast_caseA" and p.t2 <= p.t1 + p.b1:
                    variant = "multicast_caseB"
            spec = construct(p)
            pattern = make_periodic(variant, p)
            double_rule = (p.t1, p.t2) if variant == "region_f_T2B2" else None
    except UnknownRegionError as exc:
        print(f"error: capacity open: {exc}", file=sys.stderr)
        return EXIT_OPEN_CAPACITY
    except (NonIntegerAlphaError, InfeasibleParamsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = run_pec(spec, pattern, periods=args.periods, double_rule=double_rule)
    rows = result.report.to_csv_rows()
    for summary in result.summaries:
        counted = summary.counted_recovered
        unerased = summary.unerased_counted
        note = f" (+{summary.double_recovered} double)" if summary.double_recovered else ""
        print(
            f"period {summary.period_index}: erased {summary.erased}, recovered "
            f"{summary.recovered}{note}, revealed {summary.revealed}, "
            f"counted {counted} from {unerased} unerased -> ratio {_frac(Fraction(unerased, counted))}"
        )
    if args.out:
        _emit(args, _csv_text(("t", "row", "erased", "recovery_time"), rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burstfec",
        description="streaming erasure codes over burst channels: regions, capacities, codes, sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(sp, need_user2=False):
        sp.add_argument("--b1", type=int, required=True, help="user-1 burst length")
        sp.add_argument("--t1", type=int, required=True, help="user-1 delay")
        sp.add_argument("--b2", type=int, default=None, required=need_user2, help="user-2 burst length")
        sp.add_argument("--t2", type=int, default=None, required=need_user2, help="user-2 delay")
        sp.add_argument("--out", default=None, help="write machine-readable output here")

    sp = sub.add_parser("classify", help="name the (B1,T1,B2,T2) region")
    add_params(sp, need_user2=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("capacity", help="capacity and upper bounds, point or sweep")
    add_params(sp, need_user2=False)
    sp.add_argument("--sweep", type=int, default=None, metavar="N", help="sweep all params in 1..N")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("build", help="dump a constructed code in golden text form")
    add_params(sp)
    sp.add_argument("--field", choices=("gf2", "gf256"), default=None)
    sp.add_argument("--method", choices=("auto", "ia-sco"), default="auto")
    sp.add_argument("--format", choices=("golden",), default="golden")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", help="exhaustive burst/deadline sweep")
    add_params(sp)
    sp.add_argument("--field", choices=("gf2", "gf256"), default=None)
    sp.add_argument("--method", choices=("auto", "ia-sco"), default="auto")
    sp.add_argument("--window", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("pec", help="periodic-erasure-channel recovery schedule")
    add_params(sp)
    sp.add_argument(
        "--variant",
        choices=("auto", "single_user", "multicast_caseA", "multicast_caseB",
                 "region_e", "region_f1", "region_f_T2B2"),
        default="auto",
    )
    sp.add_argument("--periods", type=int, default=4)
    sp.set_defaults(func=cmd_pec)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "b2", None) is not None and args.t2 is None:
        parser.error("--b2 requires --t2")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
