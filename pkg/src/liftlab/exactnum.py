"""Exact rational scalars and dense labeled matrices.

Scalars are :class:`fractions.Fraction`, which is always kept in lowest terms
with a positive denominator and is backed by arbitrary-precision integers, so
nothing here can silently wrap or round.
"""
from __future__ import annotations

import json
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, NamedTuple, Sequence

Rational = Fraction

_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def as_rational(value: Any) -> Fraction:
    """Coerce ints, Fractions and fraction strings to a canonical Fraction.

    Floats are refused: an exact library must never ingest binary
    approximations by accident.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def rat_op(a: Any, b: Any, op: str) -> Fraction | int:
    """Apply ``op`` in {add, sub, mul, div, cmp} to two rationals.

    ``cmp`` returns -1, 0 or 1; every other op returns a canonical Fraction.
    Division by zero raises :class:`ZeroDivisionError`.

    >>> rat_op(Fraction(1, 2), Fraction(1, 3), "add")
    Fraction(5, 6)
    >>> rat_op(1, 2, "cmp")
    -1
    """
    x, y = as_rational(a), as_rational(b)
    if op == "cmp":
        return (x > y) - (x < y)
    try:
        fn = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown rational op {op!r}") from None
    if op == "div" and y == 0:
        raise ZeroDivisionError(f"division of {format_rational(x)} by zero")
    return fn(x, y)


def format_rational(x: Fraction | int) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; the fraction must already be canonical.

    ``"3/1"`` is accepted as the long form of ``"3"``.  Anything that would
    need reduction (``"2/4"``, ``"1/-2"``) is rejected so that serialized
    matrices round-trip byte for byte.
    """
    s = text.strip()
    num_s, sep, den_s = s.partition("/")
    try:
        num = int(num_s)
        den = int(den_s) if sep else 1
    except ValueError:
        raise ValueError(f"not a fraction string: {text!r}") from None
    if den <= 0:
        raise ValueError(f"denominator must be positive: {text!r}")
    if math.gcd(num, den) != 1 and not (num == 0 and den == 1):
        raise ValueError(f"fraction not in lowest terms: {text!r}")
    return Fraction(num, den)


class Mismatch(NamedTuple):
    """First cell where a claimed product differs from its target."""

    row: int
    col: int
    row_label: str
    col_label: str
    got: Fraction
    want: Fraction

    def __str__(self) -> str:
        return (
            f"mismatch at ({self.row_label}, {self.col_label}): "
            f"got {format_rational(self.got)}, want {format_rational(self.want)}"
        )


def default_labels(count: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(count))


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix of exact rationals with opaque string labels on both axes."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(str(r) for r in self.row_labels)
        cols = tuple(str(c) for c in self.col_labels)
        grid = tuple(tuple(as_rational(v) for v in row) for row in self.entries)
        if len(grid) != len(rows):
            raise ValueError(f"{len(grid)} entry rows for {len(rows)} row labels")
        for i, row in enumerate(grid):
            if len(row) != len(cols):
                raise ValueError(
                    f"row {rows[i]!r} has {len(row)} entries for {len(cols)} columns"
                )
        for axis, labels in (("row", rows), ("column", cols)):
            if len(set(labels)) != len(labels):
                dup = next(l for l in labels if labels.count(l) > 1)
                raise ValueError(f"duplicate {axis} label {dup!r}")
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)
        object.__setattr__(self, "entries", grid)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Iterable[Any]],
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ) -> "RatMatrix":
        grid = [list(r) for r in rows]
        width = len(grid[0]) if grid else len(col_labels or ())
        return cls(
            tuple(row_labels) if row_labels is not None else default_labels(len(grid)),
            tuple(col_labels) if col_labels is not None else default_labels(width),
            tuple(tuple(r) for r in grid),
        )

    @classmethod
    def zeros(cls, row_labels: Sequence[str], col_labels: Sequence[str]) -> "RatMatrix":
        z = Fraction(0)
        return cls(tuple(row_labels), tuple(col_labels),
                   tuple((z,) * len(col_labels) for _ in row_labels))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def row_index(self, label: str) -> int:
        try:
            return self.row_labels.index(label)
        except ValueError:
            raise KeyError(f"no row labeled {label!r}") from None

    def col_index(self, label: str) -> int:
        try:
            return self.col_labels.index(label)
        except ValueError:
            raise KeyError(f"no column labeled {label!r}") from None

    def entry(self, row_label: str, col_label: str) -> Fraction:
        return self.entries[self.row_index(row_label)][self.col_index(col_label)]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for row in self.entries for v in row)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.col_labels, self.row_labels, tuple(zip(*self.entries))
                         if self.entries else tuple(() for _ in self.col_labels))

    def select_columns(self, keep: Sequence[int]) -> "RatMatrix":
        return RatMatrix(self.row_labels, tuple(self.col_labels[j] for j in keep),
                         tuple(tuple(row[j] for j in keep) for row in self.entries))

    def select_rows(self, keep: Sequence[int]) -> "RatMatrix":
        return RatMatrix(tuple(self.row_labels[i] for i in keep), self.col_labels,
                         tuple(self.entries[i] for i in keep))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return matmul(self, other)

    def to_json_obj(self) -> dict:
        return {
            "rows": list(self.row_labels),
            "cols": list(self.col_labels),
            "entries": [[format_rational(v) for v in row] for row in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RatMatrix":
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except (KeyError, TypeError):
            raise ValueError("matrix JSON needs 'rows', 'cols' and 'entries'") from None
        for row in entries:
            for v in row:
                if not isinstance(v, str):
                    raise ValueError(f"matrix entry {v!r} is not a fraction string")
        return cls(tuple(rows), tuple(cols),
                   tuple(tuple(parse_rational(v) for v in row) for row in entries))

    @classmethod
    def from_json(cls, text: str) -> "RatMatrix":
        return cls.from_json_obj(json.loads(text))


def _scaled_rows(m: RatMatrix) -> list[tuple[int, list[tuple[int, int]]]]:
    """Each row as (common denominator, sparse integer numerators)."""
    out = []
    for row in m.entries:
        den = math.lcm(*(v.denominator for v in row)) if row else 1
        out.append((den, [(k, v.numerator * (den // v.denominator))
                          for k, v in enumerate(row) if v]))
    return out


def _scaled_cols(m: RatMatrix) -> list[tuple[int, list[int]]]:
    out = []
    for j in range(m.shape[1]):
        col = m.column(j)
        den = math.lcm(*(v.denominator for v in col)) if col else 1
        out.append((den, [v.numerator * (den // v.denominator) for v in col]))
    return out


def _check_inner(a: RatMatrix, b: RatMatrix) -> None:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    if a.col_labels != b.row_labels:
        raise ValueError("inner labels differ between left columns and right rows")


def matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Exact product; rows and columns are scaled to integers before summing."""
    _check_inner(a, b)
    rows, cols = _scaled_rows(a), _scaled_cols(b)
    grid = []
    for da, sparse in rows:
        grid.append(tuple(Fraction(sum(v * col[k] for k, v in sparse), da * db)
                          for db, col in cols))
    return RatMatrix(a.row_labels, b.col_labels, tuple(grid))


def mat_mul_eq(a: RatMatrix, b: RatMatrix, s: RatMatrix) -> Mismatch | None:
    """Compare ``a @ b`` with ``s`` exactly; None means equal.

    Labels must line up (left rows with target rows, right columns with
    target columns, left columns with right rows), otherwise ValueError.
    """
    _check_inner(a, b)
    if (a.shape[0], b.shape[1]) != s.shape:
        raise ValueError(f"product shape {(a.shape[0], b.shape[1])} vs target {s.shape}")
    if a.row_labels != s.row_labels or b.col_labels != s.col_labels:
        raise ValueError("factor labels do not match target labels")
    rows, cols = _scaled_rows(a), _scaled_cols(b)
    for i, (da, sparse) in enumerate(rows):
        target = s.entries[i]
        for j, (db, col) in enumerate(cols):
            want = target[j]
            num = sum(v * col[k] for k, v in sparse)
            # num / (da*db) == want.numerator / want.denominator
            if num * want.denominator != want.numerator * da * db:
                return Mismatch(i, j, s.row_labels[i], s.col_labels[j],
                                Fraction(num, da * db), want)
    return None


def harmonic(n: int) -> Fraction:
    """Exact harmonic number 1 + 1/2 + ... + 1/n."""
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def _ln_series(x: int, terms_tol: Fraction) -> tuple[Fraction, Fraction]:
    # ln x = 2 * sum_{m odd} z^m / m with z = (x-1)/(x+1); returns (partial, tail bound)
    z = Fraction(x - 1, x + 1)
    z2 = z * z
    partial = Fraction(0)
    power = z
    m = 1
    while True:
        partial += 2 * power / m
        power *= z2
        m += 2
        tail = 2 * power / (m * (1 - z2))
        if tail <= terms_tol:
            return partial, tail


def ln_bounds(x: int, tol: Fraction = Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
    """Rational (lower, upper) bounds on ln(x) for an integer x >= 1, upper-lower <= tol."""
    if x < 1:
        raise ValueError("ln bounds need x >= 1")
    if x == 1:
        return Fraction(0), Fraction(0)
    partial, tail = _ln_series(x, tol / 4)
    scale = 10**9
    lower = Fraction(math.floor(partial * scale), scale)
    upper = Fraction(math.ceil((partial + tail) * scale), scale)
    return lower, upper
