"""Arithmetic over GF(2^m) and exact linear-system solving.

Sub-symbols live in a characteristic-2 field.  The default field is plain
GF(2) (addition is XOR, multiplication is AND), which is all the shipped
constructions need; GF(2^8) with the reduction polynomial 0x11D is kept as a
fallback for block codes that have no binary realization.

The elimination code is shared by the block-code verifier and the streaming
decoder.  It keeps the system in reduced row echelon form at all times so
that an unknown is reported *determined* exactly when every satisfying
assignment gives it the same value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class MismatchedFieldError(ValueError):
    """Two operands belong to different field specs."""


class InconsistentSystemError(ValueError):
    """A linear system contradicts itself (0 = nonzero after reduction)."""


def _is_irreducible(poly: int, m: int) -> bool:
    # Trial division by all polynomials of degree 1..m//2 over GF(2).
    for d in range(1, m // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, cand) == 0:
                return False
    return True


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) description: ``order_exponent`` m and a reduction polynomial.

    The polynomial is an integer bitmask with bit m set (ignored for m=1).
    """

    order_exponent: int = 1
    reduction_polynomial: int = 0x11D

    def __post_init__(self) -> None:
        m = self.order_exponent
        if m < 1:
            raise ValueError(f"order exponent must be >= 1, got {m}")
        if m > 1:
            poly = self.reduction_polynomial
            if poly.bit_length() - 1 != m:
                raise ValueError(
                    f"reduction polynomial 0x{poly:X} does not have degree {m}"
                )
            if not _is_irreducible(poly, m):
                raise ValueError(f"reduction polynomial 0x{poly:X} is reducible")

    @property
    def size(self) -> int:
        return 1 << self.order_exponent

    def check_value(self, value: int) -> int:
        if not 0 <= value < self.size:
            raise ValueError(f"value {value} outside GF(2^{self.order_exponent})")
        return value

    def add(self, a: int, b: int) -> int:
        return a ^ b

    # Characteristic 2: subtraction coincides with addition.
    sub = add

    def mul(self, a: int, b: int) -> int:
        if self.order_exponent == 1:
            return a & b
        return _gf_mul(self.order_exponent, self.reduction_polynomial, a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.order_exponent == 1:
            return 1
        # a^(2^m - 2) by square-and-multiply; fields are tiny.
        result, exp, base = 1, self.size - 2, a
        while exp:
            if exp & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exp >>= 1
        return result

    def pow(self, a: int, n: int) -> int:
        result = 1
        for _ in range(n):
            result = self.mul(result, a)
        return result


@lru_cache(maxsize=None)
def _gf_mul(m: int, poly: int, a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        if a >> m:
            a ^= poly
        b >>= 1
    return out


GF2 = FieldSpec(1)
GF256 = FieldSpec(8, 0x11D)


@dataclass(frozen=True)
class FieldElement:
    """A value tied to its field; arithmetic checks the specs match."""

    field: FieldSpec
    value: int

    def __post_init__(self) -> None:
        self.field.check_value(self.value)

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise MismatchedFieldError(f"{self.field} vs {other.field}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


class IncrementalSolver:
    """Reduced-row-echelon elimination accepting equations one at a time.

    Unknowns are integer column indices.  After every insertion the system
    stays in RREF, so an unknown is uniquely determined exactly when its
    pivot row has singleton support.  ``add_equation`` returns the unknowns
    that became determined because of that equation.

    GF(2) rows are stored as int bitmasks (column j <-> bit j); larger
    fields use sparse coefficient dicts with the pivot normalized to 1.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        self._binary = field.order_exponent == 1
        self._pivots: dict[int, tuple] = {}  # col -> (row, rhs)
        self._determined: dict[int, int] = {}

    @property
    def determined(self) -> dict[int, int]:
        return self._determined

    def add_equation(self, coeffs, rhs: int) -> list[tuple[int, int]]:
        """Insert one equation; ``coeffs`` maps column -> nonzero coefficient.

        For GF(2) an int bitmask is also accepted.  Raises
        :class:`InconsistentSystemError` when the equation contradicts the
        current span.
        """
        if self._binary:
            return self._add_binary(coeffs, rhs)
        return self._add_generic(dict(coeffs), rhs)

    # -- GF(2) fast path ---------------------------------------------------

    def _add_binary(self, mask, rhs: int) -> list[tuple[int, int]]:
        if not isinstance(mask, int):
            m = 0
            for col, coeff in (mask.items() if isinstance(mask, dict) else mask):
                if coeff & 1:
                    m ^= 1 << col
            mask = m
        pivots = self._pivots
        # Reduce against every pivot column present in the row.  Pivot rows
        # keep their pivot as the lowest set bit, so elimination only ever
        # introduces higher bits and one ascending scan suffices.
        scan = mask
        while scan:
            low = scan & -scan
            col = low.bit_length() - 1
            hit = pivots.get(col)
            if hit is not None:
                mask ^= hit[0]
                rhs ^= hit[1]
                scan = mask >> (col + 1) << (col + 1)
            else:
                scan ^= low
        if mask == 0:
            if rhs:
                raise InconsistentSystemError("contradictory equation")
            return []
        col = (mask & -mask).bit_length() - 1
        bit = 1 << col
        for c, (pm, pr) in list(pivots.items()):
            if pm & bit:
                pivots[c] = (pm ^ mask, pr ^ rhs)
        pivots[col] = (mask, rhs)
        return self._collect_new_singletons_binary()

    def _collect_new_singletons_binary(self) -> list[tuple[int, int]]:
        fresh = []
        for col, (pm, pr) in self._pivots.items():
            if col not in self._determined and pm & (pm - 1) == 0:
                self._determined[col] = pr
                fresh.append((col, pr))
        return fresh

    # -- generic GF(2^m) path ----------------------------------------------

    def _add_generic(self, row: dict[int, int], rhs: int) -> list[tuple[int, int]]:
        f = self.field
        pivots = self._pivots
        while True:
            hit_col = next((c for c in sorted(row) if c in pivots), None)
            if hit_col is None:
                break
            factor = row[hit_col]
            prow, prhs = pivots[hit_col]
            for c, v in prow.items():
                nv = f.add(row.get(c, 0), f.mul(factor, v))
                if nv:
                    row[c] = nv
                elif c in row:
                    del row[c]
            rhs = f.add(rhs, f.mul(factor, prhs))
        if not row:
            if rhs:
                raise InconsistentSystemError("contradictory equation")
            return []
        col = min(row)
        inv = f.inv(row[col])
        row = {c: f.mul(inv, v) for c, v in row.items()}
        rhs = f.mul(inv, rhs)
        for c, (prow, prhs) in list(pivots.items()):
            factor = prow.get(col, 0)
            if factor:
                nrow = dict(prow)
                for cc, v in row.items():
                    nv = f.add(nrow.get(cc, 0), f.mul(factor, v))
                    if nv:
                        nrow[cc] = nv
                    elif cc in nrow:
                        del nrow[cc]
                pivots[c] = (nrow, f.add(prhs, f.mul(factor, rhs)))
        pivots[col] = (row, rhs)
        return self._collect_new_singletons_generic()

    def _collect_new_singletons_generic(self) -> list[tuple[int, int]]:
        fresh = []
        for col, (prow, prhs) in self._pivots.items():
            if col not in self._determined and len(prow) == 1:
                self._determined[col] = prhs
                fresh.append((col, prhs))
        return fresh


@dataclass(frozen=True)
class LinearSystem:
    """Rows of (coefficients, rhs) over named unknowns."""

    field: FieldSpec
    labels: tuple
    rows: tuple  # of (tuple_of_coeffs, rhs)

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("unknown labels must be unique")
        for coeffs, _ in self.rows:
            if len(coeffs) != len(self.labels):
                raise ValueError("row width does not match label count")


def solve(system: LinearSystem) -> dict:
    """Gaussian elimination; determined unknowns map to their value, the
    rest to ``None``.  Raises :class:`InconsistentSystemError` on
    contradictory rows."""
    solver = IncrementalSolver(system.field)
    for coeffs, rhs in system.rows:
        row = {j: c for j, c in enumerate(coeffs) if c}
        if row or rhs:
            solver.add_equation(row, rhs)
    det = solver.determined
    return {label: det.get(j) for j, label in enumerate(system.labels)}
