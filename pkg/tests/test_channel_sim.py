import random
from dataclasses import dataclass

import pytest

from burstfec.algebra import GF2
from burstfec.channel_sim import (
    ERASED,
    Periodic,
    SingleBurst,
    UserSpec,
    apply_channel,
    generic_decode,
    make_periodic,
    make_single_burst,
    run_pec,
    source_fill,
    verify_deadlines,
)
from burstfec.code_model import StreamingCodeSpec, Tap, encode, make_row
from burstfec.musco import MulticastParams
from burstfec.sco import ScoParams, construct_sco


def test_single_burst_pattern():
    p = make_single_burst(5, 2)
    assert [t for t in range(10) if p.erased(t)] == [5, 6]
    assert make_single_burst(0, 1).erased(0)
    assert not make_single_burst(0, 1).erased(1)


def test_periodic_pattern_and_reveals():
    p = Periodic(period=5, burst=2)
    assert [t for t in range(12) if p.erased(t)] == [0, 1, 5, 6, 10, 11]
    r = Periodic(period=5, burst=3, revealed=(1,))
    assert [t for t in range(6) if r.erased(t)] == [0, 2, 5]
    assert r.is_revealed(1) and r.is_revealed(6)


def test_apply_channel():
    stream = [(t,) for t in range(8)]
    assert apply_channel(stream, SingleBurst(5, 2))[5] is ERASED
    assert apply_channel(stream, SingleBurst(5, 2))[4] == (4,)
    assert apply_channel(stream, SingleBurst(0, 0)) == stream
    assert all(x is ERASED for x in apply_channel(stream, SingleBurst(0, 8)))


def test_no_erasures_systematic_recovery():
    spec = construct_sco(ScoParams(1, 2))
    src = source_fill(2, 8, 2)
    rec = apply_channel(encode(spec, src, 8), SingleBurst(0, 0))
    report = generic_decode(spec, rec, SingleBurst(0, 0), 8)
    for t in range(8):
        for row in range(2):
            assert report.entries[(t, row)].recovery_time == t


def test_sco_1_2_single_erasure_trace():
    # erase time 5 of the (1,2) code: row 1 returns at 6, row 0 at 7
    spec = construct_sco(ScoParams(1, 2))
    src = source_fill(2, 12, 2)
    pattern = SingleBurst(5, 1)
    report = generic_decode(spec, apply_channel(encode(spec, src, 12), pattern), pattern, 12)
    assert report.recovery_time(5, 1) == 6
    assert report.recovery_time(5, 0) == 7
    assert report.entries[(5, 0)].value == src[5][0]
    assert report.entries[(5, 1)].value == src[5][1]


def test_report_csv_shape():
    spec = construct_sco(ScoParams(1, 2))
    src = source_fill(2, 6, 2)
    pattern = SingleBurst(2, 1)
    report = generic_decode(spec, apply_channel(encode(spec, src, 6), pattern), pattern, 6)
    rows = report.to_csv_rows()
    assert (2, 0, 1, 4) in rows and (3, 0, 0, 3) in rows


def test_verify_vacuous_for_zero_burst():
    spec = construct_sco(ScoParams(2, 3))
    assert verify_deadlines(spec, UserSpec(0, 3), 10).passed


def test_verify_catches_sabotage():
    good = construct_sco(ScoParams(2, 3))
    rows = (good.parity_rows[0], make_row([Tap(1, 3, 1)]))  # drop the s2 tap
    bad = StreamingCodeSpec(GF2, 3, rows, "sabotaged")
    res = verify_deadlines(bad, UserSpec(2, 3), 20)
    assert not res.passed
    assert res.counterexample is not None


# -- decoder/oracle equivalence ------------------------------------------------


@dataclass(frozen=True)
class SetPattern:
    times: frozenset

    def erased(self, t: int) -> bool:
        return t in self.times


def _oracle_determined_by_time(spec, received, erased_times, horizon):
    """All consistent source streams must agree: enumerate assignments of the
    erased sub-symbols, filtering by the parity equations seen so far."""
    unknowns = [(t, r) for t in sorted(erased_times) for r in range(spec.n_source)]
    key = {u: i for i, u in enumerate(unknowns)}
    k = len(unknowns)
    sols = list(range(1 << k))

    def known(t, row, assign):
        if t < 0:
            return 0
        if t in erased_times:
            return (assign >> key[(t, row)]) & 1
        return received[t][row]

    out = []
    determined = {}
    for t in range(horizon):
        if t not in erased_times:
            eqs = []
            for r, prow in enumerate(spec.parity_rows):
                eqs.append((prow, received[t][spec.n_source + r]))
            sols = [
                a
                for a in sols
                if all(
                    sum(known(t - tap.delay, tap.source_row, a) for tap in prow.taps) % 2 == rhs
                    for prow, rhs in eqs
                )
            ]
        for u, i in key.items():
            if u in determined:
                continue
            vals = {(a >> i) & 1 for a in sols}
            if len(vals) == 1:
                determined[u] = (t, vals.pop())
        out.append(dict(determined))
    return out


def _random_instance(rng):
    n_src = rng.randint(1, 3)
    horizon = rng.randint(6, 12)
    n_par = rng.randint(1, 3)
    rows = []
    for _ in range(n_par):
        taps = {
            (rng.randrange(n_src), rng.randint(0, 4))
            for _ in range(rng.randint(1, 3))
        }
        rows.append(make_row([Tap(r, d, 1) for r, d in taps]))
    spec = StreamingCodeSpec(GF2, n_src, tuple(rows))
    n_erase = rng.randint(1, min(4, horizon))
    erased = frozenset(rng.sample(range(horizon), n_erase))
    src = [[rng.randint(0, 1) for _ in range(n_src)] for _ in range(horizon)]
    return spec, src, erased, horizon


@pytest.mark.parametrize("seed", [1, 2])
def test_decoder_matches_brute_force_oracle(seed):
    rng = random.Random(seed)
    for _ in range(40):
        spec, src, erased, horizon = _random_instance(rng)
        pattern = SetPattern(erased)
        received = apply_channel(encode(spec, src, horizon), pattern)
        report = generic_decode(spec, received, pattern, horizon)
        oracle = _oracle_determined_by_time(spec, received, erased, horizon)
        for t in range(horizon):
            got = {
                u: rep.value
                for u, rep in report.entries.items()
                if rep.erased and rep.recovery_time is not None and rep.recovery_time <= t
            }
            want = {u: v for u, (tt, v) in oracle[t].items()}
            assert got == want, (t, got, want)
        # soundness against ground truth
        for (t, r), rep in report.entries.items():
            if rep.erased and rep.value is not None:
                assert rep.value == src[t][r]


# -- periodic-erasure-channel schedules ---------------------------------------


def test_make_periodic_variants():
    p = make_periodic("single_user", (2, 3))
    assert (p.period, p.burst) == (5, 2)
    mp = MulticastParams(1, 2, 2, 4)
    p = make_periodic("multicast_caseA", mp)
    assert (p.period, p.burst) == (5, 2)
    p = make_periodic("region_e", MulticastParams(4, 5, 7, 10))
    assert (p.period, p.burst, p.revealed) == (12, 7, (2,))
    p = make_periodic("region_f_T2B2", MulticastParams(2, 3, 4, 4))
    assert (p.period, p.burst) == (7, 4)
    with pytest.raises(ValueError):
        make_periodic("nope", mp)
    with pytest.raises(ValueError):
        make_periodic("multicast_caseA", MulticastParams(2, 3, 4, 4))


def test_single_user_pec_schedule():
    spec = construct_sco(ScoParams(2, 3))
    res = run_pec(spec, make_periodic("single_user", (2, 3)), periods=4)
    for s in res.summaries:
        assert (s.erased, s.recovered) == (2, 2)
        assert (s.unerased_counted, s.counted_recovered) == (3, 5)
    # every erased symbol comes back before its own period ends
    for t, rec in res.schedule():
        assert rec is not None and rec <= (t // 5 + 1) * 5 - 1


def test_multicast_caseA_pec_recovers_by_period_end():
    from burstfec.musco import construct

    mp = MulticastParams(1, 2, 2, 4)
    spec = construct(mp)
    res = run_pec(spec, make_periodic("multicast_caseA", mp), periods=4)
    c = res.pattern.period
    for t, rec in res.schedule():
        assert rec is not None and rec <= (t // c + 1) * c - 1


def test_region_f_t1b1_user2_trace():
    # burst of 5 just before i: the two deepest sub-symbols come back at
    # delay exactly T2 = 6 via the shifted diagonal row, the rest at T1 = 4
    from burstfec.musco import construct

    mp = MulticastParams(4, 4, 5, 6)
    spec = construct(mp)
    src = source_fill(spec.n_source, 40, 2)
    pattern = SingleBurst(12, 5)
    report = generic_decode(spec, apply_channel(encode(spec, src, 40), pattern), pattern, 40)
    assert report.recovery_time(12, 0) == 18  # s0[i-5] exactly at i+1, delay T2
    assert report.recovery_time(12, 1) <= 18  # s1[i-5] by i+1
    for t in range(13, 17):
        assert report.symbol_recovery_time(t) == t + 4


def test_ia_sco_decode_traces():
    from burstfec.musco import MulticastParams as MP, construct_ia_sco

    spec = construct_ia_sco(MP(1, 2, 2, 6))
    src = source_fill(spec.n_source, 40, 2)
    chan = encode(spec, src, 40)
    # user 1: a single erasure at i-1 is fully back by i+1
    pattern = SingleBurst(11, 1)
    report = generic_decode(spec, apply_channel(chan, pattern), pattern, 40)
    assert report.symbol_recovery_time(11) == 13
    # user 2: a double erasure is back within delay 6
    pattern = SingleBurst(11, 2)
    report = generic_decode(spec, apply_channel(chan, pattern), pattern, 40)
    assert report.symbol_recovery_time(11) <= 17
    assert report.symbol_recovery_time(12) <= 18


def test_guarded_multi_burst_sweep_single_user():
    from burstfec.channel_sim import verify_guarded_bursts

    # a guard interval of T symbols restores the single-burst guarantee
    for B, T in [(1, 2), (2, 3), (2, 4)]:
        spec = construct_sco(ScoParams(B, T))
        assert verify_guarded_bursts(spec, UserSpec(B, T), guard=T, window=2 * (T + B)).passed
    # back-to-back bursts exceed the design and must be caught
    spec = construct_sco(ScoParams(2, 3))
    assert not verify_guarded_bursts(spec, UserSpec(2, 3), guard=0, window=10).passed
