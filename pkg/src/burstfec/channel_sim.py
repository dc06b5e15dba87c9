"""Erasure patterns, the universal linear decoder, and deadline sweeps.

The decoder is construction-agnostic: unknowns are the source sub-symbols of
erased time steps, every received systematic or parity sub-symbol contributes
one linear equation, and incremental row reduction reports the first time
step at which each unknown is pinned down.  Determinedness is exact (an
unknown is reported recovered at time t iff all source streams consistent
with the symbols received up to t agree on it), which is what makes the
sweeps in here usable as acceptance oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .algebra import IncrementalSolver
from .code_model import StreamingCodeSpec, encode

ERASED = None  # erasure mark in a received stream


@dataclass(frozen=True)
class SingleBurst:
    """Erases exactly [start, start + length - 1]."""

    start: int
    length: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.length < 0:
            raise ValueError("burst start/length must be non-negative")

    def erased(self, t: int) -> bool:
        return self.start <= t < self.start + self.length


@dataclass(frozen=True)
class Periodic:
    """Erases [k*period + offset, ... + burst - 1] for every k >= 0.

    ``revealed`` lists in-period offsets exempted from erasure; they model
    the genie-revealed symbols of the counting arguments and are excluded
    from the recovered-symbol counts.
    """

    period: int
    burst: int
    offset: int = 0
    revealed: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 < self.burst <= self.period:
            raise ValueError("need 0 < burst <= period")

    def erased(self, t: int) -> bool:
        if t < self.offset:
            return False
        phase = (t - self.offset) % self.period
        return phase < self.burst and phase not in self.revealed

    def is_revealed(self, t: int) -> bool:
        if t < self.offset:
            return False
        phase = (t - self.offset) % self.period
        return phase < self.burst and phase in self.revealed


ErasurePattern = SingleBurst | Periodic


def make_single_burst(start: int, length: int) -> SingleBurst:
    return SingleBurst(start, length)


def apply_channel(stream: Sequence[tuple], pattern: ErasurePattern) -> list:
    """Replace erased symbols with the erasure mark; pass the rest through."""
    return [ERASED if pattern.erased(t) else sym for t, sym in enumerate(stream)]


@dataclass
class SymbolReport:
    erased: bool
    recovery_time: Optional[int]
    value: Optional[int]


@dataclass
class DecodeReport:
    """Per source sub-symbol (t, row): earliest determination time and value."""

    n_source: int
    horizon: int
    entries: dict = dc_field(default_factory=dict)  # (t, row) -> SymbolReport

    def recovery_time(self, t: int, row: int) -> Optional[int]:
        return self.entries[(t, row)].recovery_time

    def symbol_recovery_time(self, t: int) -> Optional[int]:
        """Latest recovery time over the rows of s[t]; None if any row failed."""
        times = [self.entries[(t, r)].recovery_time for r in range(self.n_source)]
        if any(x is None for x in times):
            return None
        return max(times)

    def erased_entries(self):
        return ((key, rep) for key, rep in self.entries.items() if rep.erased)

    def user_violations(self, deadline: int) -> list[tuple[int, int]]:
        bad = []
        for (t, row), rep in self.entries.items():
            if rep.erased and (rep.recovery_time is None or rep.recovery_time > t + deadline):
                bad.append((t, row))
        return sorted(bad)

    def to_csv_rows(self) -> list[tuple]:
        rows = []
        for (t, row) in sorted(self.entries):
            rep = self.entries[(t, row)]
            rec = "FAIL" if rep.recovery_time is None else rep.recovery_time
            rows.append((t, row, int(rep.erased), rec))
        return rows


def generic_decode(
    spec: StreamingCodeSpec,
    received: Sequence,
    pattern: ErasurePattern,
    horizon: int,
) -> DecodeReport:
    """Incremental elimination over the erased source sub-symbols.

    Equations arrive in time order; the recovery time of an unknown is the
    first step at which the received prefix determines it uniquely.
    """
    field = spec.field
    n_src = spec.n_source
    report = DecodeReport(n_src, horizon)
    uid: dict[tuple[int, int], int] = {}
    by_col: list[tuple[int, int]] = []
    for t in range(horizon):
        if pattern.erased(t):
            if received[t] is not ERASED:
                raise ValueError(f"received symbol present at erased time {t}")
            for row in range(n_src):
                uid[(t, row)] = len(by_col)
                by_col.append((t, row))
                report.entries[(t, row)] = SymbolReport(True, None, None)

    solver = IncrementalSolver(field)

    def note_determined(fresh, now: int) -> None:
        for col, value in fresh:
            t, row = by_col[col]
            rep = report.entries[(t, row)]
            rep.recovery_time = now
            rep.value = value

    known: dict[tuple[int, int], int] = {}
    binary = field.order_exponent == 1
    for t in range(horizon):
        if pattern.erased(t):
            continue
        sym = received[t]
        if sym is ERASED:
            raise ValueError(f"missing symbol at unerased time {t}")
        for row in range(n_src):
            known[(t, row)] = sym[row]
            report.entries.setdefault((t, row), SymbolReport(False, t, sym[row]))
        for r, prow in enumerate(spec.parity_rows):
            rhs = sym[n_src + r]
            eq_mask = 0
            eq: dict[int, int] = {}
            touched = False
            for tap in prow.taps:
                tt = t - tap.delay
                if tt < 0:
                    continue
                col = uid.get((tt, tap.source_row))
                if col is None:
                    rhs = field.add(rhs, field.mul(tap.coeff, known[(tt, tap.source_row)]))
                else:
                    touched = True
                    if binary:
                        eq_mask ^= 1 << col
                    else:
                        eq[col] = field.add(eq.get(col, 0), tap.coeff)
            if not touched:
                continue
            if binary:
                if eq_mask:
                    note_determined(solver.add_equation(eq_mask, rhs), t)
            else:
                eq = {c: v for c, v in eq.items() if v}
                if eq:
                    note_determined(solver.add_equation(eq, rhs), t)
    return report


# -- deadline verification ---------------------------------------------------


def source_fill(n_source: int, horizon: int, field_size: int, seed: int = 0) -> list[tuple]:
    """Deterministic pseudo-random source stream (no RNG state)."""
    out = []
    for t in range(horizon):
        row = []
        for r in range(n_source):
            h = (t * 1000003 + r * 7919 + seed * 104729 + 12345) & 0xFFFFFFFF
            h ^= h >> 13
            h = (h * 2654435761) & 0xFFFFFFFF
            h ^= h >> 17
            row.append(h % field_size if field_size > 2 else (h >> 1) & 1)
        out.append(tuple(row))
    return out


@dataclass(frozen=True)
class UserSpec:
    burst: int
    delay: int


@dataclass
class Counterexample:
    burst_start: int
    burst_length: int
    symbol: tuple[int, int]
    deadline: int
    recovery_time: Optional[int]


@dataclass
class VerifyResult:
    passed: bool
    trials: int
    counterexample: Optional[Counterexample] = None


def verify_deadlines(
    spec: StreamingCodeSpec,
    user: UserSpec,
    window: int,
    seed: int = 0,
    check_values: bool = True,
) -> VerifyResult:
    """Exhaustive single-burst sweep: every start in [memory, memory+window)
    and every burst length in [1, user.burst] must decode every erased source
    sub-symbol by its deadline t + user.delay (inclusive).

    Returns the first counterexample found, scanning starts in order.
    """
    if user.burst == 0:
        return VerifyResult(True, 0)
    memory = spec.memory
    horizon = memory + window + user.burst + user.delay + 1
    src = source_fill(spec.n_source, horizon, spec.field.size, seed)
    channel = encode(spec, src, horizon)
    trials = 0
    for start in range(memory, memory + window):
        for length in range(1, user.burst + 1):
            trials += 1
            pattern = SingleBurst(start, length)
            received = apply_channel(channel, pattern)
            # Equations after the last deadline cannot help meet it.
            h = min(horizon, start + length + user.delay + 1)
            report = generic_decode(spec, received, pattern, h)
            for (t, row), rep in report.erased_entries():
                late = rep.recovery_time is None or rep.recovery_time > t + user.delay
                if late:
                    return VerifyResult(
                        False,
                        trials,
                        Counterexample(start, length, (t, row), t + user.delay, rep.recovery_time),
                    )
                if check_values and rep.value != src[t][row]:
                    raise AssertionError(
                        f"decoder returned a wrong value at {(t, row)}: encoder bug"
                    )
    return VerifyResult(True, trials)


# -- periodic-erasure-channel schedules ---------------------------------------


def make_periodic(variant: str, params, periods_hint: int = 4) -> Periodic:
    """Periodic pattern for the named counting schedule.

    ``params`` is a MulticastParams-like object with b1/t1/b2/t2 attributes
    (ignored for the single-user variant, which takes a (B, T) tuple).
    """
    if variant == "single_user":
        B, T = params
        return Periodic(period=T + B, burst=B)
    b1, t1, b2, t2 = params.b1, params.t1, params.b2, params.t2
    if variant == "multicast_caseA":
        if t2 <= t1 + b1:
            raise ValueError("case A needs T2 > T1 + B1")
        return Periodic(period=t2 + b2 - b1, burst=b2)
    if variant == "multicast_caseB":
        if t2 > t1 + b1:
            raise ValueError("case B needs T2 <= T1 + B1")
        return Periodic(period=b2 + t1, burst=b2)
    if variant == "region_e":
        a = t1 + b2 - t2
        b = b2 - b1
        return Periodic(period=b2 + t1, burst=b2, revealed=tuple(range(a, b)))
    if variant == "region_f1":
        a = b2 - b1
        b = a + t2 - t1
        return Periodic(period=b2 + t2 - b1, burst=b2, revealed=tuple(range(b, b2)))
    if variant == "region_f_T2B2":
        return Periodic(period=b2 + t1, burst=b2)
    raise ValueError(f"unknown periodic variant {variant!r}")


@dataclass
class PecPeriodSummary:
    period_index: int
    erased: int
    recovered: int
    revealed: int
    unerased_counted: int
    double_recovered: int = 0

    @property
    def counted_recovered(self) -> int:
        # revealed positions are excluded; double recoveries count twice
        return self.recovered + self.unerased_counted + self.double_recovered


@dataclass
class PecRunResult:
    pattern: Periodic
    periods: int
    report: DecodeReport
    summaries: list[PecPeriodSummary]

    def schedule(self) -> list[tuple[int, Optional[int]]]:
        out = []
        for t in range(self.periods * self.pattern.period):
            if self.pattern.erased(t):
                out.append((t, self.report.symbol_recovery_time(t)))
        return out


def run_pec(
    spec: StreamingCodeSpec,
    pattern: Periodic,
    periods: int = 4,
    seed: int = 0,
    double_rule: Optional[tuple[int, int]] = None,
) -> PecRunResult:
    """Encode, erase periodically, decode, and tally per-period counts.

    The simulation runs ``periods`` full periods with the tail unerased.
    ``double_rule=(T1, T2)`` activates the double tally of the minimum-delay
    counting argument: an erased symbol counts twice when the fast code
    already pinned it down by t + T1 *and* its direct repetition copy at
    t + T2 arrives unerased, so either decoder alone would have produced it.
    """
    horizon = periods * pattern.period + spec.memory + 1
    src = source_fill(spec.n_source, horizon, spec.field.size, seed)
    channel = encode(spec, src, horizon)
    received = apply_channel(channel, pattern)
    report = generic_decode(spec, received, pattern, horizon)

    def is_double(t: int) -> bool:
        if double_rule is None:
            return False
        t1, t2 = double_rule
        rec = report.symbol_recovery_time(t)
        return rec is not None and rec <= t + t1 and not pattern.erased(t + t2)

    summaries = []
    for k in range(periods):
        lo, hi = k * pattern.period, (k + 1) * pattern.period
        erased = [t for t in range(lo, hi) if pattern.erased(t)]
        revealed = [t for t in range(lo, hi) if pattern.is_revealed(t)]
        recovered = sum(1 for t in erased if report.symbol_recovery_time(t) is not None)
        summaries.append(
            PecPeriodSummary(
                period_index=k,
                erased=len(erased),
                recovered=recovered,
                revealed=len(revealed),
                unerased_counted=pattern.period - pattern.burst,
                double_recovered=sum(1 for t in erased if is_double(t)),
            )
        )
    return PecRunResult(pattern, periods, report, summaries)


# -- structured region-(e) decoding -------------------------------------------


class StructureMismatchError(ValueError):
    """The spec handed in was not produced by the region-(e) construction."""


@dataclass
class RegionEDecodeResult:
    report: DecodeReport
    helper_recoveries: dict  # (c1 parity row index, time) -> availability time


def region_e_structured_decode(
    spec: StreamingCodeSpec,
    params,
    received: Sequence,
    burst: SingleBurst,
) -> RegionEDecodeResult:
    """Layered decode of a full-length burst on the weaker user's channel.

    Follows the construction's own recipe instead of generic elimination:
    (1) rebuild the missing layer-3 parity values from the helper parities
    riding in layer 4 (with their non-causal parts completed), checking the
    zero-delay property as it goes; (2)/(3) strip the recovered and the
    directly-computable interference from layers 3 and 4; (4) read the
    repetition copies to recover every erased source symbol at delay T2.
    """
    from .musco import region_e_plan  # local import; musco builds on this module

    plan = region_e_plan(params.normalized())
    if plan.to_spec().parity_rows != spec.parity_rows or plan.params != params.normalized():
        raise StructureMismatchError("spec does not match the region-(e) plan")
    p = plan.params
    if burst.length != p.b2:
        raise StructureMismatchError(f"expected a burst of length B2={p.b2}")
    field = spec.field
    t1, t2, t3, k = p.t1, p.t2, plan.t3, plan.k
    sigma = burst.start
    i_end = sigma + p.b2  # first clean time after the burst
    n_src = spec.n_source
    l2_off, l3_off, l4_off = n_src + 0, n_src + k, n_src + p.b1

    def src_val(t: int, row: int) -> int:
        if t < 0:
            return 0
        sym = received[t]
        if sym is ERASED:
            raise StructureMismatchError(f"needed source s{row}[{t}] is erased")
        return sym[row]

    def row_value(prow, t: int) -> int:
        acc = 0
        for tap in prow.taps:
            acc = field.add(acc, field.mul(tap.coeff, src_val(t - tap.delay, tap.source_row)))
        return acc

    def w_from_sources(j: int, t: int) -> tuple[int, int]:
        """(value, availability) of c1 parity row j at time t, via unerased
        sources only."""
        prow = plan.c1_rows[j]
        avail = max((t - tap.delay for tap in prow.taps), default=t)
        return row_value(prow, t), max(avail, 0)

    # Step 1a: layer-3 reads before the missing window give w directly.
    w_val: dict[tuple[int, int], int] = {}
    w_avail: dict[tuple[int, int], int] = {}
    for t in range(i_end, i_end + t3):
        for idx in range(t3):
            rep = src_val(t - t2, idx)
            val = field.sub(received[t][l3_off + idx], rep)
            w_val[(k + idx, t)] = val
            w_avail[(k + idx, t)] = t

    # Step 1b..1e: helper equations pin down w over the missing window.
    missing = [
        (k + idx, t)
        for t in range(i_end + t3, i_end + t1)
        for idx in range(t3)
    ]
    helper_recoveries: dict[tuple[int, int], int] = {}
    if missing:
        col = {key: c for c, key in enumerate(missing)}
        solver = IncrementalSolver(field)
        equations = []
        for t in range(i_end, i_end + t3):
            for ell, hrow in enumerate(plan.helper_w_rows):
                rep = src_val(t - t2, t3 + ell)
                tilde = field.sub(received[t][l4_off + ell], rep)
                # add back the non-causal taps the encoder dropped
                avail = t
                full = tilde
                for tap in plan.layer4_dropped[ell].taps:
                    ts = t - tap.delay  # delay < 0: a strictly later source
                    full = field.add(full, field.mul(tap.coeff, src_val(ts, tap.source_row)))
                    avail = max(avail, ts)
                eq: dict[int, int] = {}
                for tap in hrow.taps:
                    wt = t - tap.delay
                    key = (k + tap.source_row, wt)
                    if key in col:
                        c = col[key]
                        eq[c] = field.add(eq.get(c, 0), tap.coeff)
                    else:
                        if key not in w_val:
                            v, av = w_from_sources(*key)
                            w_val[key], w_avail[key] = v, av
                        full = field.sub(full, field.mul(tap.coeff, w_val[key]))
                        avail = max(avail, w_avail[key])
                eq = {c: v for c, v in eq.items() if v}
                if eq:
                    equations.append((avail, eq, full))
        equations.sort(key=lambda e: e[0])
        for avail, eq, rhs in equations:
            for c, value in solver.add_equation(eq, rhs):
                j, wt = missing[c]
                w_val[(j, wt)] = value
                w_avail[(j, wt)] = max(avail, w_avail.get((j, wt), 0))
                helper_recoveries[(j, wt)] = avail
        for j, wt in missing:
            if (j, wt) not in w_val:
                raise StructureMismatchError(
                    f"helper parities leave layer-3 value ({j},{wt}) undetermined"
                )
            if w_avail[(j, wt)] > wt:
                raise StructureMismatchError(
                    f"zero-delay recovery violated for layer-3 value ({j},{wt})"
                )

    def w_value_at(j: int, t: int) -> tuple[int, int]:
        key = (j, t)
        if key not in w_val:
            v, av = w_from_sources(j, t)
            w_val[key], w_avail[key] = v, av
        return w_val[key], w_avail[key]

    # Steps 2-4: strip interference at each repetition read and recover.
    report = DecodeReport(n_src, len(received))
    for t in range(len(received)):
        if not burst.erased(t):
            sym = received[t]
            if sym is not ERASED:
                for row in range(n_src):
                    report.entries[(t, row)] = SymbolReport(False, t, sym[row])
    for tau in range(sigma, i_end):
        read_t = tau + t2
        if read_t >= len(received):
            raise StructureMismatchError("received stream too short for the T2 reads")
        for rho in range(n_src):
            if rho < t3:
                wv, wav = w_value_at(k + rho, read_t)
                value = field.sub(received[read_t][l3_off + rho], wv)
                when = max(read_t, wav)
            else:
                # The transmitted layer-4 part is causal(sum of w-taps).
                # Evaluate it from sources directly when they are all clean;
                # otherwise go through the helper values recovered in step 1
                # (sum of w values minus the dropped non-causal taps).
                ell = rho - t3
                acc = received[read_t][l4_off + ell]
                when = read_t
                causal = plan.layer4_causal[ell].taps
                if all(not burst.erased(read_t - tap.delay) for tap in causal):
                    for tap in causal:
                        acc = field.sub(
                            acc, field.mul(tap.coeff, src_val(read_t - tap.delay, tap.source_row))
                        )
                else:
                    for tap in plan.helper_w_rows[ell].taps:
                        wv, wav = w_value_at(k + tap.source_row, read_t - tap.delay)
                        acc = field.sub(acc, field.mul(tap.coeff, wv))
                        when = max(when, wav)
                    for tap in plan.layer4_dropped[ell].taps:
                        ts = read_t - tap.delay
                        acc = field.add(acc, field.mul(tap.coeff, src_val(ts, tap.source_row)))
                        when = max(when, ts)
                value = acc
            report.entries[(tau, rho)] = SymbolReport(True, when, value)
    return RegionEDecodeResult(report, helper_recoveries)


# -- multiple bursts with a guard interval -------------------------------------


@dataclass(frozen=True)
class TwoBursts:
    """Two bursts separated by a guard gap of unerased symbols."""

    first_start: int
    first_length: int
    gap: int
    second_length: int

    def erased(self, t: int) -> bool:
        if self.first_start <= t < self.first_start + self.first_length:
            return True
        s2 = self.first_start + self.first_length + self.gap
        return s2 <= t < s2 + self.second_length


def verify_guarded_bursts(
    spec: StreamingCodeSpec,
    user: UserSpec,
    guard: int,
    window: int,
    seed: int = 0,
) -> VerifyResult:
    """Deadline sweep over pairs of full-length bursts separated by at least
    ``guard`` clean symbols.

    Single-user codes tolerate repeated bursts once the guard reaches the
    decoding delay; nothing beyond the single-burst guarantee is promised for
    the multicast constructions, so this is exploratory tooling rather than
    part of their contract.
    """
    if user.burst == 0:
        return VerifyResult(True, 0)
    memory = spec.memory
    span = 2 * user.burst + guard + 2
    horizon = memory + window + span + user.delay + 1
    src = source_fill(spec.n_source, horizon, spec.field.size, seed)
    channel = encode(spec, src, horizon)
    trials = 0
    for start in range(memory, memory + window):
        for gap in (guard, guard + 1):
            trials += 1
            pattern = TwoBursts(start, user.burst, gap, user.burst)
            received = apply_channel(channel, pattern)
            h = min(horizon, start + 2 * user.burst + gap + user.delay + 1)
            report = generic_decode(spec, received, pattern, h)
            for (t, row), rep in report.erased_entries():
                if rep.recovery_time is None or rep.recovery_time > t + user.delay:
                    return VerifyResult(
                        False,
                        trials,
                        Counterexample(start, user.burst, (t, row), t + user.delay, rep.recovery_time),
                    )
    return VerifyResult(True, trials)
