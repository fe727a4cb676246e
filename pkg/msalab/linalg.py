# -*- coding: utf-8 -*-
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this file,
# You can obtain one at http://mozilla.org/MPL/2.0/.

import logging
from collections import namedtuple
from fractions import Fraction

from msalab.errors import FieldDisagreementError
from msalab.faces import boundary_rows

logger = logging.getLogger(__name__)


class BinaryField:
    name = "gf2"
    zero = 0
    one = 1

    def from_int(self, value):
        return value & 1

    def add(self, a, b):
        return a ^ b

    sub = add

    def mul(self, a, b):
        return a & b

    def inv(self, a):
        assert a == 1, "Zero has no inverse"
        return 1

    def __repr__(self):
        return "GF(2)"


class PrimeField:
    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not a prime")
        self.p = p
        self.name = f"gfp:{p}"
        self.zero = 0
        self.one = 1

    def from_int(self, value):
        return value % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        assert a % self.p, "Zero has no inverse"
        return pow(a, self.p - 2, self.p)

    def __repr__(self):
        return f"GF({self.p})"


class RationalField:
    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, value):
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def __repr__(self):
        return "Q"


GF2 = BinaryField()
RATIONALS = RationalField()


def get_field(spec):
    """Parse a field description: gf2, gfp:P or rational."""
    if isinstance(spec, (BinaryField, PrimeField, RationalField)):
        return spec

    spec = str(spec).strip().lower()
    if spec == "gf2":
        return GF2
    if spec == "rational":
        return RATIONALS
    if spec.startswith("gfp:"):
        try:
            p = int(spec[4:])
        except ValueError:
            raise ValueError(f"Invalid prime in field {spec!r}")
        if p == 2:
            return GF2
        return PrimeField(p)

    raise ValueError(f"Unknown field {spec!r}, expected gf2, gfp:P or rational")


class SparseColumn:
    """Sorted (row, coefficient) pairs with no stored zeros."""

    __slots__ = ("entries",)

    def __init__(self, entries=(), field=GF2):
        merged = {}
        for row, coeff in entries:
            coeff = field.from_int(coeff) if isinstance(coeff, int) else coeff
            merged[row] = field.add(merged.get(row, field.zero), coeff)
        self.entries = tuple(
            (row, coeff) for row, coeff in sorted(merged.items()) if coeff != field.zero
        )

    @classmethod
    def from_face(cls, rank, n, d, field=GF2):
        return cls(boundary_rows(rank, n, d), field)

    @property
    def pivot(self):
        return self.entries[-1][0] if self.entries else None

    @property
    def rows(self):
        return [row for row, _ in self.entries]

    def __bool__(self):
        return bool(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, SparseColumn) and self.entries == other.entries

    def __repr__(self):
        return f"SparseColumn({list(self.entries)})"


AbsorbResult = namedtuple("AbsorbResult", ["independent", "pivot"])


class ReductionState:
    """Pivot-indexed basis of fully reduced columns.

    Over GF(2) stored columns are bit-packed into Python ints (bit i set means
    row i is present); other fields store {row: coefficient} dicts normalised
    so that the pivot coefficient is one.
    """

    def __init__(self, field=GF2):
        self.field = get_field(field)
        self.pivot_map = {}
        self.columns_absorbed = 0
        self._packed = isinstance(self.field, BinaryField)

    @property
    def rank(self):
        return len(self.pivot_map)

    def copy(self):
        other = ReductionState(self.field)
        other.pivot_map = dict(self.pivot_map)
        other.columns_absorbed = self.columns_absorbed
        return other

    def _encode(self, column):
        if self._packed:
            bits = 0
            for row, _ in column.entries:
                bits ^= 1 << row
            return bits
        return dict(column.entries)

    def _decode(self, value):
        if self._packed:
            entries = []
            while value:
                low = value & -value
                entries.append((low.bit_length() - 1, 1))
                value ^= low
            return SparseColumn(entries, self.field)
        return SparseColumn(value.items(), self.field)

    def _reduce_packed(self, bits):
        pivot_map = self.pivot_map
        while bits:
            stored = pivot_map.get(bits.bit_length() - 1)
            if stored is None:
                break
            bits ^= stored
        return bits

    def _reduce_sparse(self, col):
        field = self.field
        pivot_map = self.pivot_map
        while col:
            pivot = max(col)
            stored = pivot_map.get(pivot)
            if stored is None:
                break
            factor = col[pivot]
            for row, coeff in stored.items():
                value = field.sub(col.get(row, field.zero), field.mul(factor, coeff))
                if value == field.zero:
                    col.pop(row, None)
                else:
                    col[row] = value
        return col

    def _reduce(self, value):
        if self._packed:
            return self._reduce_packed(value)
        return self._reduce_sparse(value)

    def reduce(self, column):
        return self._decode(self._reduce(self._encode(column)))

    def is_dependent(self, column):
        return not self._reduce(self._encode(column))

    def absorb(self, column):
        self.columns_absorbed += 1
        residual = self._reduce(self._encode(column))
        if not residual:
            return AbsorbResult(False, None)

        if self._packed:
            pivot = residual.bit_length() - 1
        else:
            pivot = max(residual)
            inverse = self.field.inv(residual[pivot])
            residual = {
                row: self.field.mul(coeff, inverse) for row, coeff in residual.items()
            }

        assert pivot not in self.pivot_map, "Pivots must stay distinct"
        self.pivot_map[pivot] = residual
        return AbsorbResult(True, pivot)


def reduce_column(column, state):
    return state.reduce(column)


def absorb(column, state):
    return state.absorb(column)


def rank_of(columns, field=GF2):
    state = ReductionState(field)
    for column in columns:
        state.absorb(column)
    return state.rank


def face_columns(ranks, n, d, field=GF2):
    field = get_field(field)
    return [SparseColumn.from_face(int(rank), n, d, field) for rank in ranks]


def cross_check_rank(ranks, n, d, fields=("gf2", "gfp:1009", "rational")):
    """Rank of the boundary columns of the given d-faces over several fields.

    Disagreement means torsion; it is logged and raised with the ranks found.
    """
    found = {}
    for spec in fields:
        field = get_field(spec)
        found[field.name] = rank_of(face_columns(ranks, n, d, field), field)

    if len(set(found.values())) > 1:
        logger.warning(f"Field ranks disagree for n={n}, d={d}: {found}")
        raise FieldDisagreementError(f"Field ranks disagree: {found}", found)

    return found


def persistence_pairs(columns, field=GF2):
    """Standard left-to-right persistence reduction over a column stream.

    Yields (column index, low row) for every column that does not reduce to
    zero; such a column kills the class born at its low row. Columns are
    kept as {row: coefficient} dicts and reduced by their low entries only.
    """
    field = get_field(field)
    lows = {}
    for index, column in enumerate(columns):
        col = dict(column.entries)
        while col:
            low = max(col)
            other = lows.get(low)
            if other is None:
                break
            factor = field.mul(col[low], field.inv(other[low]))
            for row, coeff in other.items():
                value = field.sub(col.get(row, field.zero), field.mul(factor, coeff))
                if value == field.zero:
                    col.pop(row, None)
                else:
                    col[row] = value
        if col:
            low = max(col)
            lows[low] = col
            yield index, low
