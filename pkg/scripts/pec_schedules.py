#!/usr/bin/env python3
"""Print the periodic-erasure recovery schedules behind the converse counts.

Runs the worked parameter points over their matching periodic channels and
shows, per period, which source symbols come back when and what the
recovered/unerased ratio works out to.
"""

import sys

from burstfec.channel_sim import make_periodic, run_pec
from burstfec.musco import MulticastParams, construct
from burstfec.sco import ScoParams, construct_sco

POINTS = [
    ("single_user", (2, 3), None),
    ("multicast_caseA", MulticastParams(1, 2, 2, 4), None),
    ("region_e", MulticastParams(4, 5, 7, 10), None),
    ("region_f_T2B2", MulticastParams(2, 3, 4, 4), "double"),
]


def main() -> int:
    for variant, params, flavor in POINTS:
        if variant == "single_user":
            spec = construct_sco(ScoParams(*params))
            label = f"single user {params}"
        else:
            spec = construct(params)
            label = f"{variant} {(params.b1, params.t1, params.b2, params.t2)}"
        pattern = make_periodic(variant, params)
        double_rule = (params.t1, params.t2) if flavor == "double" else None
        res = run_pec(spec, pattern, periods=4, double_rule=double_rule)
        print(f"== {label}: period {pattern.period}, burst {pattern.burst}, "
              f"revealed {pattern.revealed}")
        for s in res.summaries:
            print(f"   period {s.period_index}: recovered {s.recovered} of {s.erased} erased"
                  f"{f' (+{s.double_recovered} double)' if s.double_recovered else ''},"
                  f" counted {s.counted_recovered} from {s.unerased_counted} unerased")
        first = [(t, rec) for t, rec in res.schedule() if t < pattern.period]
        print(f"   first-period schedule: {first}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
