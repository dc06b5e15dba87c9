"""Two-receiver multicast codes: region map, capacity formulas, constructions.

Parameters are (B1, T1, B2, T2) with B2 >= B1 after normalization.  The
plane splits into a large-delay regime (T1 >= B2 or T2 >= B1 + B2) with four
capacity cases a/b/c/d, and a low-delay box containing region e (solved) and
region f (solved only on its T1 = B1 and T2 = B2 edges).  Every closed form
is exact rational arithmetic; every construction returns a tap-set spec whose
rate equals the dispatched capacity and which the simulator can verify
against both users' deadlines.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .algebra import GF2, GF256, FieldSpec
from .code_model import (
    ParityRow,
    StreamingCodeSpec,
    Tap,
    causal_truncate,
    combine_rows,
    compose_rows,
    concat_rows,
    make_row,
    noncausal_part,
    shift_rows,
)
from .ldbebc import BlockCodeSpec, construct_ldbebc
from .sco import (
    InfeasibleParamsError,
    ScoParams,
    construct_sco,
    main_diagonal_rows,
    opposite_diagonal_rows,
    single_user_capacity,
)


class NonIntegerAlphaError(ValueError):
    """The burst ratio B2/B1 is fractional; this construction needs it whole."""


class UnknownRegionError(ValueError):
    """Capacity (hence an optimal construction) is open for these parameters."""


@dataclass(frozen=True)
class MulticastParams:
    b1: int
    t1: int
    b2: int
    t2: int

    def __post_init__(self) -> None:
        if min(self.b1, self.t1, self.b2, self.t2) < 1:
            raise ValueError("all parameters must be >= 1")

    def normalized(self) -> "MulticastParams":
        """Swap the users if needed so that B2 >= B1."""
        if self.b2 < self.b1:
            return MulticastParams(self.b2, self.t2, self.b1, self.t1)
        return self

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.b2, self.b1)

    @property
    def feasible(self) -> bool:
        return self.t1 >= self.b1 and self.t2 >= self.b2


class Region(enum.Enum):
    A = "a"
    A_PRIME = "a'"
    B = "b"
    C = "c"
    D = "d"
    E = "e"
    F_INTERIOR = "f"
    F_T1_EQ_B1 = "f(T1=B1)"
    F_T2_EQ_B2 = "f(T2=B2)"
    INFEASIBLE = "infeasible"


def classify(params: MulticastParams) -> Region:
    p = params.normalized()
    if not p.feasible:
        return Region.INFEASIBLE
    large_delay = p.t1 >= p.b2 or p.t2 >= p.b1 + p.b2
    if large_delay:
        if p.t2 >= p.alpha * p.t1 + p.b1:
            ia_ok = (
                p.alpha.denominator == 1
                and p.alpha > 1
                and p.t2 >= p.alpha * p.t1 + p.t1
            )
            return Region.A_PRIME if ia_ok else Region.A
        if p.t1 + p.b1 < p.t2:
            return Region.B
        if p.t1 < p.t2:
            return Region.C
        return Region.D
    if p.t2 >= p.t1 + p.b1:
        return Region.E
    if p.t1 == p.b1:
        return Region.F_T1_EQ_B1
    if p.t2 == p.b2:
        return Region.F_T2_EQ_B2
    return Region.F_INTERIOR


def region_inequalities(params: MulticastParams) -> list[str]:
    """Human-readable evaluations of the inequalities behind classify()."""
    p = params.normalized()
    a = p.alpha
    out = [
        f"feasible: T1={p.t1} >= B1={p.b1} and T2={p.t2} >= B2={p.b2}: {p.feasible}",
        f"large delay: T1={p.t1} >= B2={p.b2} or T2={p.t2} >= B1+B2={p.b1 + p.b2}: "
        f"{p.t1 >= p.b2 or p.t2 >= p.b1 + p.b2}",
        f"alpha = B2/B1 = {a}",
        f"T2 >= alpha*T1+B1 = {a * p.t1 + p.b1}: {p.t2 >= a * p.t1 + p.b1}",
        f"T1+B1 = {p.t1 + p.b1} < T2: {p.t1 + p.b1 < p.t2}",
        f"T2 >= T1+B1 (low-delay split): {p.t2 >= p.t1 + p.b1}",
    ]
    return out


def upper_bound_pec(params: MulticastParams) -> Fraction:
    """Periodic-erasure-channel bound: (T2-B1)/(T2-B1+B2) above the
    T2 = T1+B1 line, T1/(T1+B2) at or below it."""
    p = params.normalized()
    if p.t2 > p.t1 + p.b1:
        return Fraction(p.t2 - p.b1, p.t2 - p.b1 + p.b2)
    return Fraction(p.t1, p.t1 + p.b2)


def upper_bound_cu(params: MulticastParams) -> Fraction:
    """Tightened bound min{C+, C1, C2}, in its four-case closed form."""
    p = params.normalized()
    c1 = single_user_capacity(p.b1, p.t1)
    c2 = single_user_capacity(p.b2, p.t2)
    if p.t2 >= p.alpha * p.t1 + p.b1:
        return c1
    if p.t1 + p.b1 < p.t2:
        return Fraction(p.t2 - p.b1, p.t2 - p.b1 + p.b2)
    if p.t1 < p.t2:
        return Fraction(p.t1, p.t1 + p.b2)
    return c2


def f_region_upper_bound(params: MulticastParams) -> Fraction:
    p = params.normalized()
    return Fraction(p.t2 - p.b1, 2 * (p.t2 - p.b1) + (p.b2 - p.t1))


@dataclass(frozen=True)
class CapacityResult:
    capacity: Optional[Fraction]
    upper_bound: Fraction
    achieving_construction: Optional[str]


def capacity(params: MulticastParams) -> CapacityResult:
    p = params.normalized()
    region = classify(p)
    if region is Region.INFEASIBLE:
        return CapacityResult(Fraction(0), Fraction(0), None)
    if region in (Region.A, Region.A_PRIME):
        c = single_user_capacity(p.b1, p.t1)
        return CapacityResult(c, c, "de-sco")
    if region is Region.B:
        c = Fraction(p.t2 - p.b1, p.t2 - p.b1 + p.b2)
        return CapacityResult(c, c, "de-sco+source-expansion")
    if region is Region.C:
        c = Fraction(p.t1, p.t1 + p.b2)
        return CapacityResult(c, c, f"sco({p.b2},{p.t1})")
    if region is Region.D:
        c = single_user_capacity(p.b2, p.t2)
        return CapacityResult(c, c, f"sco({p.b2},{p.t2})")
    if region is Region.E:
        c = Fraction(p.t1, 2 * p.t1 + p.b1 + p.b2 - p.t2)
        return CapacityResult(c, c, "layered-e")
    if region is Region.F_T1_EQ_B1:
        c = f_region_upper_bound(p)
        return CapacityResult(c, c, "repetition+sco-concat")
    if region is Region.F_T2_EQ_B2:
        c = Fraction(p.t1, 2 * p.t1 + p.b1)
        return CapacityResult(c, c, "sco+repetition-concat")
    # interior of region f: open
    return CapacityResult(None, min(f_region_upper_bound(p), upper_bound_cu(p)), None)


# -- shared construction helpers ---------------------------------------------


def _integer_alpha(p: MulticastParams) -> int:
    if p.alpha.denominator != 1:
        raise NonIntegerAlphaError(
            f"B2/B1 = {p.alpha} is not an integer; no construction is known here"
        )
    return int(p.alpha)


def _block_pair(b_t_pairs, field: FieldSpec | None):
    """Construct several block codes over one common field, escalating all of
    them to GF(2^8) if any single one needs it (0/1 patterns stay valid there
    because matrix rank is preserved under field extension)."""
    blocks = [construct_ldbebc(b, t, field) for b, t in b_t_pairs]
    if any(bl.field == GF256 for bl in blocks):
        blocks = [
            bl
            if bl.field == GF256
            else BlockCodeSpec(bl.T, bl.B, GF256, bl.parity_defs, bl.pattern + "+gf256")
            for bl in blocks
        ]
    return blocks


def _repetition_rows(rows: int, delay: int, start_row: int = 0) -> tuple[ParityRow, ...]:
    return tuple(make_row([Tap(start_row + r, delay, 1)]) for r in range(rows))


# -- region (a): diversity-embedded combination ------------------------------


def de_sco_rows(block: BlockCodeSpec, alpha: int, t1: int) -> tuple[ParityRow, ...]:
    """Main-diagonal parity stream p plus the mirrored opposite-diagonal
    stream q delayed by T1, combined row-wise: x[i] = (s[i], p[i] + q[i-T1]).

    The anti-diagonal runs at slope alpha-1 and parity j of the codeword
    anchored at w is emitted at w + (alpha-1)(j+1) + B; these offsets
    reproduce the published worked examples and pass the exhaustive
    two-user deadline sweeps for every parameter combination in range.
    """
    f = alpha - 1
    p_rows = main_diagonal_rows(block)
    offsets = [f * (j + 1) + block.B for j in range(block.B)]
    q_rows = opposite_diagonal_rows(block, f, offsets)
    return tuple(
        combine_rows(a, b, block.field) for a, b in zip(p_rows, shift_rows(q_rows, t1))
    )


def construct_de_sco(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    p = params.normalized()
    if classify(p) not in (Region.A, Region.A_PRIME):
        raise InfeasibleParamsError(f"{p} is not a region-(a) point")
    alpha = _integer_alpha(p)
    (block,) = _block_pair([(p.b1, p.t1)], field)
    rows = de_sco_rows(block, alpha, p.t1)
    return StreamingCodeSpec(
        block.field, p.t1, rows, f"de-sco({p.b1},{p.t1})-({p.b2},{p.t2})"
    )


# -- region (a'): interference-avoidance combination -------------------------


def construct_ia_sco(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    """q[i] = p_I[i] + p_II[i - T1] with p_II the vertically-interleaved
    (alpha B, alpha T) stream; needs integer alpha > 1 and T2 >= (alpha+1) T1."""
    p = params.normalized()
    alpha = _integer_alpha(p)
    if alpha < 2 or p.t2 < (alpha + 1) * p.t1:
        raise InfeasibleParamsError(
            f"interference avoidance needs T2 >= (alpha+1)*T1; got {p}"
        )
    (block,) = _block_pair([(p.b1, p.t1)], field)
    p1 = main_diagonal_rows(block)
    p2 = main_diagonal_rows(block, factor=alpha)
    rows = tuple(
        combine_rows(a, b, block.field) for a, b in zip(p1, shift_rows(p2, p.t1))
    )
    return StreamingCodeSpec(
        block.field, p.t1, rows, f"ia-sco({p.b1},{p.t1})-({p.b2},{p.t2})"
    )


# -- region (b): delay reduction plus source expansion ------------------------


@dataclass(frozen=True)
class ExpansionPlan:
    """Region-(b) reduction: T1 shrinks to T1~ = (B1/B2)(T2 - B1), and when
    that is fractional each source symbol splits into n^2 T1~ sub-symbols so
    a DE-SCo at (n B1, n T1~) applies on a base expanded by factor n."""

    params: MulticastParams
    t1_tilde: Fraction
    n: int

    @property
    def inner_params(self) -> MulticastParams:
        n = self.n
        return MulticastParams(
            n * self.params.b1,
            int(n * self.t1_tilde),
            n * self.params.b2,
            n * self.params.t2,
        )

    @property
    def sub_symbols_per_symbol(self) -> int:
        return int(self.n * self.n * self.t1_tilde)

    def original_row(self, phase: int, expanded_row: int) -> int:
        """Expanded (time phase, row) -> row index on the original base."""
        return phase * int(self.n * self.t1_tilde) + expanded_row


def source_expand(params: MulticastParams, n: Optional[int] = None) -> ExpansionPlan:
    p = params.normalized()
    t1_tilde = Fraction(p.b1, p.b2) * (p.t2 - p.b1)
    if t1_tilde < p.b1:
        raise InfeasibleParamsError("T1~ below B1; outside region (b)")
    minimal = t1_tilde.denominator
    if n is None:
        n = minimal
    elif (n * t1_tilde).denominator != 1:
        raise ValueError(f"n={n} does not clear the denominator of T1~={t1_tilde}")
    return ExpansionPlan(p, t1_tilde, n)


def fold_spec(spec: StreamingCodeSpec, n: int, label: str) -> StreamingCodeSpec:
    """Fold an expanded-base spec back onto the original time base.

    Expanded step n*i + r maps to phase r of original step i; expanded row
    rho becomes original row r * n_source + rho.  Parity rows are emitted in
    phase-major order, matching transmission of all n expanded parities
    inside one original symbol.
    """
    g = spec.n_source
    rows = []
    for phase in range(n):
        for prow in spec.parity_rows:
            taps = []
            for tap in prow.taps:
                tt = phase - tap.delay
                src_phase = tt % n
                delay = (src_phase - tt) // n
                taps.append(Tap(src_phase * g + tap.source_row, delay, tap.coeff))
            rows.append(make_row(taps, spec.field))
    return StreamingCodeSpec(spec.field, n * g, tuple(rows), label)


def construct_region_b(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    p = params.normalized()
    if classify(p) is not Region.B:
        raise InfeasibleParamsError(f"{p} is not a region-(b) point")
    alpha = _integer_alpha(p)
    plan = source_expand(p)
    ip = plan.inner_params
    (block,) = _block_pair([(ip.b1, ip.t1)], field)
    inner = StreamingCodeSpec(
        block.field, ip.t1, de_sco_rows(block, alpha, ip.t1), "inner"
    )
    label = f"region-b({p.b1},{p.t1})-({p.b2},{p.t2})"
    if plan.n == 1:
        return StreamingCodeSpec(inner.field, inner.n_source, inner.parity_rows, label)
    return fold_spec(inner, plan.n, label)


# -- regions (c) and (d): single-user reductions ------------------------------


def construct_region_c(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    p = params.normalized()
    if classify(p) is not Region.C:
        raise InfeasibleParamsError(f"{p} is not a region-(c) point")
    spec = construct_sco(ScoParams(p.b2, p.t1), field)
    return StreamingCodeSpec(
        spec.field, spec.n_source, spec.parity_rows,
        f"region-c sco({p.b2},{p.t1})",
    )


def construct_region_d(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    p = params.normalized()
    if classify(p) is not Region.D:
        raise InfeasibleParamsError(f"{p} is not a region-(d) point")
    spec = construct_sco(ScoParams(p.b2, p.t2), field)
    return StreamingCodeSpec(
        spec.field, spec.n_source, spec.parity_rows,
        f"region-d sco({p.b2},{p.t2})",
    )


# -- region (e): layered construction -----------------------------------------


@dataclass(frozen=True)
class RegionEPlan:
    """Layer map of the region-(e) code.

    Rows (after the T1 source rows): layer 2 holds the first k parities of
    the user-1 code, layer 3 the remaining B1-k combined with the first
    repetition rows, layer 4 the remaining repetitions combined with the
    causal parts of helper parities built *on* the layer-3 parity streams
    (case A: one diagonal code advanced by T1; case B: repetition helpers
    advanced by multiples of B1-k plus a final diagonal one).
    """

    params: MulticastParams
    k: int
    m: int
    case: str  # "A", "B", or "REP" when layer 4 is pure repetition
    field: FieldSpec
    c1_rows: tuple[ParityRow, ...]
    helper_w_rows: tuple[ParityRow, ...]  # over w-space, advances as negative delays
    layer4_causal: tuple[ParityRow, ...]  # transmitted source-space parts
    layer4_dropped: tuple[ParityRow, ...]  # non-causal source-space parts

    @property
    def t3(self) -> int:
        return self.params.b1 - self.k

    @property
    def w_count(self) -> int:
        return self.t3

    def layer_offsets(self) -> tuple[int, int, int]:
        """Parity-row indices where layers 2, 3, 4 start."""
        return 0, self.k, self.params.b1

    def to_spec(self) -> StreamingCodeSpec:
        p = self.params
        t3 = self.t3
        layer2 = self.c1_rows[: self.k]
        layer3 = tuple(
            combine_rows(self.c1_rows[self.k + idx], make_row([Tap(idx, p.t2, 1)]), self.field)
            for idx in range(t3)
        )
        layer4 = tuple(
            combine_rows(make_row([Tap(t3 + idx, p.t2, 1)]), self.layer4_causal[idx], self.field)
            for idx in range(p.t1 - t3)
        )
        rows = concat_rows(concat_rows(layer2, layer3), layer4)
        return StreamingCodeSpec(
            self.field, p.t1, rows, f"region-e({p.b1},{p.t1})-({p.b2},{p.t2})"
        )


@lru_cache(maxsize=None)
def region_e_plan(params: MulticastParams, field: FieldSpec | None = None) -> RegionEPlan:
    p = params.normalized()
    if classify(p) is not Region.E:
        raise InfeasibleParamsError(f"{p} is not a region-(e) point")
    k = p.b1 + p.b2 - p.t2
    m = p.t2 - p.t1 - p.b1
    t3 = p.b1 - k
    if t3 == 0:
        # T2 = B2 corner: no layer 3, layer 4 is bare repetition rows.
        (c1,) = _block_pair([(p.b1, p.t1)], field)
        empties = tuple(ParityRow(()) for _ in range(p.t1))
        return RegionEPlan(
            p, k, m, "REP", c1.field, main_diagonal_rows(c1), empties, empties, empties
        )
    b3 = p.t1 - t3
    if p.t1 <= 2 * t3:
        c1, c3 = _block_pair([(p.b1, p.t1), (b3, t3)], field)
        helper = shift_rows(main_diagonal_rows(c3), -p.t1)
        case = "A"
    else:
        r, q = divmod(p.t1 - t3, t3)
        pairs = [(p.b1, p.t1)] + ([(q, t3)] if q else [])
        blocks = _block_pair(pairs, field)
        c1 = blocks[0]
        helper_rows: list[ParityRow] = []
        for nn in range(1, r + 1):
            helper_rows.extend(
                make_row([Tap(l, -nn * t3, 1)], c1.field) for l in range(t3)
            )
        if q:
            helper_rows.extend(shift_rows(main_diagonal_rows(blocks[1]), -p.t1))
        helper = tuple(helper_rows)
        case = "B"
    c1_rows = main_diagonal_rows(c1)
    w_rows = c1_rows[k : p.b1]
    expanded = compose_rows(helper, w_rows, c1.field)
    return RegionEPlan(
        p,
        k,
        m,
        case,
        c1.field,
        c1_rows,
        helper,
        causal_truncate(expanded),
        noncausal_part(expanded),
    )


def construct_region_e(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    return region_e_plan(params.normalized(), field).to_spec()


# -- region (f) edges ----------------------------------------------------------


def construct_region_f_T1B1(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    """T1 = B1 edge: a (T1, T1) repetition stream concatenated with a
    (B2-B1, T2-T1) diagonal stream delayed by T1."""
    p = params.normalized()
    if p.t1 != p.b1:
        raise InfeasibleParamsError("construction requires T1 = B1")
    if classify(p) is not Region.F_T1_EQ_B1:
        raise InfeasibleParamsError(f"{p} is not on the region-(f) T1=B1 edge")
    n_src = p.t2 - p.t1
    rep = _repetition_rows(n_src, p.t1)
    if p.b2 > p.b1:
        (c2,) = _block_pair([(p.b2 - p.b1, p.t2 - p.t1)], field)
        extra = shift_rows(main_diagonal_rows(c2), p.t1)
        fld = c2.field
    else:
        extra, fld = (), GF2
    return StreamingCodeSpec(
        fld, n_src, concat_rows(rep, extra),
        f"region-f-minT1({p.b1},{p.t1})-({p.b2},{p.t2})",
    )


def construct_region_f_T2B2(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    """T2 = B2 edge: a (B1, T1) diagonal stream concatenated with a (T2, T2)
    repetition stream."""
    p = params.normalized()
    if p.t2 != p.b2:
        raise InfeasibleParamsError("construction requires T2 = B2")
    if classify(p) is not Region.F_T2_EQ_B2:
        raise InfeasibleParamsError(f"{p} is not on the region-(f) T2=B2 edge")
    (c1,) = _block_pair([(p.b1, p.t1)], field)
    rows = concat_rows(main_diagonal_rows(c1), _repetition_rows(p.t1, p.t2))
    return StreamingCodeSpec(
        c1.field, p.t1, rows,
        f"region-f-minT2({p.b1},{p.t1})-({p.b2},{p.t2})",
    )


# -- dispatch ------------------------------------------------------------------


@lru_cache(maxsize=None)
def construct(params: MulticastParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    """Capacity-achieving code for any region where one is known.

    Raises :class:`UnknownRegionError` inside region (f) (capacity open),
    :class:`NonIntegerAlphaError` in regions (a)/(b) with fractional B2/B1,
    and :class:`InfeasibleParamsError` when some user is infeasible.
    """
    p = params.normalized()
    region = classify(p)
    if region is Region.INFEASIBLE:
        raise InfeasibleParamsError(f"{p}: some user has delay below its burst")
    if region in (Region.A, Region.A_PRIME):
        return construct_de_sco(p, field)
    if region is Region.B:
        return construct_region_b(p, field)
    if region is Region.C:
        return construct_region_c(p, field)
    if region is Region.D:
        return construct_region_d(p, field)
    if region is Region.E:
        return construct_region_e(p, field)
    if region is Region.F_T1_EQ_B1:
        return construct_region_f_T1B1(p, field)
    if region is Region.F_T2_EQ_B2:
        return construct_region_f_T2B2(p, field)
    raise UnknownRegionError(
        f"{p} lies in the interior of region (f); capacity is open"
    )


def constructible(params: MulticastParams) -> bool:
    p = params.normalized()
    region = classify(p)
    if region in (Region.INFEASIBLE, Region.F_INTERIOR):
        return False
    if region in (Region.A, Region.A_PRIME, Region.B):
        return p.alpha.denominator == 1
    return True
