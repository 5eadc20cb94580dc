import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftlab.exactnum import (RatMatrix, as_rational, format_rational, harmonic, ln_bounds,
                              mat_mul_eq, matmul, parse_rational, rat_op)

fractions = st.fractions(max_denominator=50).map(lambda f: Fraction(f.numerator % 1000 - 500, f.denominator))


def naive_product(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


@st.composite
def matrix_pair(draw):
    r, k, c = draw(st.integers(1, 4)), draw(st.integers(1, 4)), draw(st.integers(1, 4))
    a = [[draw(fractions) for _ in range(k)] for _ in range(r)]
    b = [[draw(fractions) for _ in range(c)] for _ in range(k)]
    return a, b


def test_rat_op_basic():
    assert rat_op(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert rat_op(Fraction(1, 2), Fraction(1, 3), "sub") == Fraction(1, 6)
    assert rat_op(Fraction(2, 3), Fraction(3, 4), "mul") == Fraction(1, 2)
    assert rat_op(1, 2, "cmp") == -1 and rat_op(2, 2, "cmp") == 0 and rat_op(3, 2, "cmp") == 1
    with pytest.raises(ZeroDivisionError):
        rat_op(1, 0, "div")
    with pytest.raises(ValueError):
        rat_op(1, 1, "pow")


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)


@given(fractions)
def test_format_parse_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_parse_rejects_non_canonical():
    assert parse_rational("3/1") == 3
    assert parse_rational("-7/3") == Fraction(-7, 3)
    for bad in ("2/4", "1/-2", "1/0", "x", "1.5"):
        with pytest.raises(ValueError):
            parse_rational(bad)


@given(matrix_pair())
def test_matmul_matches_naive(pair):
    a, b = pair
    A, B = RatMatrix.from_rows(a), RatMatrix.from_rows(b)
    assert [list(r) for r in matmul(A, B).entries] == naive_product(a, b)


@given(matrix_pair(), st.data())
def test_mat_mul_eq_finds_perturbation(pair, data):
    a, b = pair
    A, B = RatMatrix.from_rows(a), RatMatrix.from_rows(b)
    S = naive_product(a, b)
    assert mat_mul_eq(A, B, RatMatrix.from_rows(S)) is None
    i = data.draw(st.integers(0, len(S) - 1))
    j = data.draw(st.integers(0, len(S[0]) - 1))
    S[i][j] += Fraction(1, 7)
    bad = mat_mul_eq(A, B, RatMatrix.from_rows(S))
    assert bad is not None and (bad.row, bad.col) == (i, j)


def test_mat_mul_eq_hand_example():
    A = RatMatrix.from_rows([[Fraction(1, 2), 1], [0, Fraction(2, 3)]])
    B = RatMatrix.from_rows([[2, 0], [Fraction(1, 3), 3]])
    assert mat_mul_eq(A, B, RatMatrix.from_rows([[Fraction(4, 3), 3], [Fraction(2, 9), 2]])) is None


def test_label_mismatch_is_an_error():
    A = RatMatrix(("r",), ("a",), ((Fraction(1),),))
    B = RatMatrix(("b",), ("c",), ((Fraction(1),),))
    with pytest.raises(ValueError):
        matmul(A, B)


def test_json_roundtrip():
    m = RatMatrix(("x", "y"), ("p", "q"), ((Fraction(1, 3), Fraction(0)), (Fraction(-2), Fraction(5, 7))))
    assert RatMatrix.from_json(m.to_json()) == m
    assert m.to_json_obj()["entries"][0] == ["1/3", "0"]


def test_matrix_validation():
    with pytest.raises(ValueError):
        RatMatrix(("a", "a"), ("c",), ((Fraction(1),), (Fraction(1),)))
    with pytest.raises(ValueError):
        RatMatrix(("a",), ("c", "d"), ((Fraction(1),),))


def test_harmonic_values():
    assert harmonic(1) == 1
    assert harmonic(4) == Fraction(25, 12)


@pytest.mark.parametrize("x", [2, 3, 4, 6, 10, 12, 100])
def test_ln_bounds_bracket_math_log(x):
    lo, hi = ln_bounds(x)
    assert lo <= Fraction(math.log(x)) <= hi
    assert hi - lo <= Fraction(1, 10**6)


def test_ln_bounds_one():
    assert ln_bounds(1) == (0, 0)
