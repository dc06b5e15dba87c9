"""Single-user streaming codes via diagonal interleaving of a block code.

``construct_sco`` places a (T, B) block code along stream diagonals:
parity row j at time i combines s_l[i - (T + j - l)] for every block tap l,
scaled by the interleave factor when one is given (all delays multiplied),
which realizes the (aB, aT) burst/delay guarantee on the same T source rows.

The opposite-diagonal variant mirrors the source rows and walks the
anti-diagonal; it is only meaningful combined with a main-diagonal stream
(see the multicast constructions), which is also where its per-row emission
offsets come from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import FieldSpec
from .code_model import ParityRow, StreamingCodeSpec, Tap, make_row
from .ldbebc import BlockCodeSpec, construct_ldbebc

MAIN = "main-diagonal"
OPPOSITE = "opposite-diagonal"


class InfeasibleParamsError(ValueError):
    """Requested a code outside its feasibility region (T < B)."""


@dataclass(frozen=True)
class ScoParams:
    """Base block parameters (B, T) plus the interleaving applied to them.

    ``interleave_factor`` a scales every tap delay, so the constructed code
    recovers bursts of length a*B within delay a*T while still carrying T
    source rows per time step (memory T * a).
    """

    burst: int
    delay: int
    direction: str = MAIN
    interleave_factor: int = 1

    def __post_init__(self) -> None:
        if self.burst < 1 or self.interleave_factor < 1:
            raise InfeasibleParamsError("burst and interleave factor must be >= 1")
        if self.delay < self.burst:
            raise InfeasibleParamsError(
                f"delay {self.delay} below burst {self.burst}: capacity is zero"
            )
        if self.direction not in (MAIN, OPPOSITE):
            raise InfeasibleParamsError(f"unknown direction {self.direction!r}")


def single_user_capacity(B: int, T: int) -> Fraction:
    """T/(T+B) when T >= B, else 0."""
    if B < 1 or T < 0:
        raise ValueError("need B >= 1 and T >= 0")
    if T < B:
        return Fraction(0)
    return Fraction(T, T + B)


def main_diagonal_rows(block: BlockCodeSpec, factor: int = 1) -> tuple[ParityRow, ...]:
    rows = []
    for j, taps in enumerate(block.parity_defs):
        rows.append(
            make_row(
                (Tap(l, factor * (block.T + j - l), c) for l, c in taps),
                block.field,
            )
        )
    return tuple(rows)


def opposite_diagonal_rows(
    block: BlockCodeSpec,
    dilation: int,
    emission_offsets: Sequence[int],
    coeffs: Sequence[Sequence[int]] | None = None,
) -> tuple[ParityRow, ...]:
    """Mirror the block's source rows (l -> T-1-l) and lay the codeword along
    an anti-diagonal of slope ``dilation``; parity j of the codeword anchored
    at w is emitted at w + emission_offsets[j].

    ``coeffs`` optionally overrides the tap coefficients per (row, tap index)
    for fields larger than GF(2).
    """
    T = block.T
    rows = []
    for j, taps in enumerate(block.parity_defs):
        c_j = emission_offsets[j]
        row = []
        for idx, (l, c) in enumerate(taps):
            if coeffs is not None:
                c = coeffs[j][idx]
            mirrored = T - 1 - l
            row.append(Tap(mirrored, c_j + dilation * mirrored, c))
        rows.append(make_row(row, block.field))
    return tuple(rows)


def construct_sco(params: ScoParams, field: FieldSpec | None = None) -> StreamingCodeSpec:
    """Diagonally-interleaved block code as a streaming spec.

    Opposite-diagonal parity streams are building blocks, not standalone
    codes (their rows are combined with a main stream by the multicast
    constructions), so this constructor only accepts the main direction.
    """
    if params.direction != MAIN:
        raise InfeasibleParamsError(
            "opposite-diagonal streams are built by the multicast constructions"
        )
    block = construct_ldbebc(params.burst, params.delay, field)
    rows = main_diagonal_rows(block, params.interleave_factor)
    a = params.interleave_factor
    label = f"sco({params.burst},{params.delay})"
    if a > 1:
        label = f"sco({params.burst},{params.delay})x{a}"
    return StreamingCodeSpec(block.field, params.delay, rows, label)
