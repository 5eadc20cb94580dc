from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftlab.exactnum import RatMatrix
from liftlab.protocol import (MarkovianProtocol, ProtocolError, check_correct,
                              compile_factorization, conditional_expectation, constant_protocol,
                              exact_expectation, factorization_to_protocol, path_probabilities,
                              simulate)

nonneg = st.fractions(min_value=0, max_value=5, max_denominator=12)


@st.composite
def factor_pair(draw):
    r, k, c = draw(st.integers(1, 5)), draw(st.integers(1, 4)), draw(st.integers(1, 5))
    A = RatMatrix.from_rows([[draw(nonneg) for _ in range(k)] for _ in range(r)])
    B = RatMatrix.from_rows([[draw(nonneg) for _ in range(c)] for _ in range(k)])
    return A, B


def two_round(first="A", claimer="A"):
    """Speaker 1 sends a coin, speaker 2 echoes or flips it depending on input."""
    half = Fraction(1, 2)
    xs, ys = ("x0", "x1"), ("y0", "y1")
    first_dom = xs if first == "A" else ys
    second_dom = ys if first == "A" else xs
    init = {z: {0: half, 1: half} if z.endswith("0") else {0: Fraction(1, 3), 1: Fraction(2, 3)}
            for z in first_dom}
    kernel = {}
    for z in second_dom:
        for u in (0, 1):
            kernel[(z, u)] = {("m", u): Fraction(1)} if z.endswith("0") else {("m", 1 - u): Fraction(1)}
    claim_dom = xs if claimer == "A" else ys
    output = {(z, ("m", 1)): Fraction(3) for z in claim_dom}
    output.update({(claim_dom[1], ("m", 0)): Fraction(1)})
    return MarkovianProtocol(((0, 1), (("m", 0), ("m", 1))), xs, ys, init, (kernel,), output,
                             first_speaker=first, claimer=claimer)


def path_sum(p, x, y):
    z = y if p.claimer == "B" else x
    return sum((w * p.claim(z, path[-1]) for path, w in path_probabilities(p, x, y)), Fraction(0))


@pytest.mark.parametrize("first", "AB")
@pytest.mark.parametrize("claimer", "AB")
def test_orientations_dp_matches_paths(first, claimer):
    p = two_round(first, claimer)
    for x in p.x_domain:
        for y in p.y_domain:
            assert exact_expectation(p, x, y) == path_sum(p, x, y)


def test_two_round_hand_value():
    p = two_round("A", "B")
    # x1 sends 1 w.p. 2/3; y1 flips, so m=0 w.p. 2/3 (claim 1) and m=1 w.p. 1/3 (claim 3)
    assert exact_expectation(p, "x1", "y1") == Fraction(2, 3) + 1
    assert exact_expectation(p, "x0", "y0") == Fraction(3, 2)


def test_constant_protocol():
    p = constant_protocol(("a", "b"), ("c",), Fraction(7, 2), nodes=(1, 2, 3))
    assert exact_expectation(p, "b", "c") == Fraction(7, 2)
    assert check_correct(p, RatMatrix(("a", "b"), ("c",), ((Fraction(7, 2),), (Fraction(7, 2),)))) is None


def test_check_correct_reports_counterexample():
    p = constant_protocol(("a",), ("c", "d"), 1)
    ce = check_correct(p, RatMatrix(("a",), ("c", "d"), ((Fraction(1), Fraction(2)),)))
    assert ce is not None and (ce.x, ce.y, ce.got, ce.want) == ("a", "d", 1, 2)


def test_validation_errors():
    with pytest.raises(ProtocolError):
        MarkovianProtocol(((1, 2),), ("a",), ("b",), {"a": {1: Fraction(1, 2)}}, (), {})
    with pytest.raises(ProtocolError):
        MarkovianProtocol(((1,),), ("a",), ("b",), {"a": {1: Fraction(1)}}, (), {("b", 1): Fraction(-1)})
    with pytest.raises(ProtocolError):
        MarkovianProtocol(((1,), (2,)), ("a",), ("b",), {"a": {1: Fraction(1)}}, ({},), {})
    with pytest.raises(ProtocolError):
        MarkovianProtocol(((1,),), ("a",), ("b",), {}, (), {})


@given(factor_pair())
def test_factorization_roundtrip(pair):
    A, B = pair
    p = factorization_to_protocol(A, B)
    product = A @ B
    assert check_correct(p, product) is None
    f = compile_factorization(p)
    assert f.verify(product) is None
    assert f.size <= A.shape[1]


def test_conditional_expectation():
    p = two_round("A", "B")
    assert conditional_expectation(p, "x0", "y1", (0,)) == 3
    assert conditional_expectation(p, "x0", "y1", (1,)) == 1
    with pytest.raises(ValueError):
        conditional_expectation(p, "x0", "y1", (5,))


def test_simulate_is_seeded_and_close():
    p = two_round("A", "B")
    a = simulate(p, "x1", "y1", 20000, seed=11)
    b = simulate(p, "x1", "y1", 20000, seed=11)
    assert a == b
    exact = exact_expectation(p, "x1", "y1")
    assert abs(float(a.mean - exact)) <= 4 * a.stderr
    assert a.count_nonneg == a.trials


def test_simulate_degenerate():
    p = constant_protocol(("a",), ("c",), 2)
    r = simulate(p, "a", "c", 10, seed=0)
    assert r.mean == 2 and r.variance == 0
