import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftlab import combi
from liftlab.exactnum import RatMatrix
from liftlab.permext import (FoolingSet, delta_sum, edmonds_membership,
                             edmonds_membership_bruteforce, fooling_verify, goemans_build,
                             goemans_verify, lift_sigma, min_k_sums, mk_monotone,
                             one_round_protocol, perm_a_matrix, perm_factorization, project,
                             quadratic_fooling_set, random_convex_lift, stages, tilde_feasible,
                             tilde_project, tilde_roundtrip, two_round_protocol, zero_path_scan)
from liftlab.protocol import check_correct, compile_factorization, exact_expectation
from liftlab.slack import slack_perm
from liftlab.sortnet import ComparatorSeq, generate, quadratic, trace


@pytest.mark.parametrize("kind", ["quadratic", "oddeven", "batcher"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_factorization_identity(kind, n):
    seq = generate(kind, n)
    f = perm_factorization(seq)
    assert f.verify() is None
    assert f.size <= 2 * seq.q
    assert set(v for row in f.A.entries for v in row) <= {0, 1}


def test_hand_cells():
    f = perm_factorization(quadratic(3)).factorization
    P = f.product()
    assert P.entry("{3}", "123") == 2
    assert f.A.entry("{3}", "(0,1)") == 1 and f.B.entry("(0,1)", "123") == 2
    assert f.A.entry("{3}", "(1,-1)") == 1 and f.B.entry("(1,-1)", "123") == 0
    for k in (1, 2):
        assert P.entry(combi.subset_label(range(1, k + 1)), "123") == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_identity_column_sums_positive_color_gaps(n):
    seq = quadratic(n)
    P = perm_factorization(seq).factorization.product()
    ident = combi.perm_label(range(1, n + 1))
    for J in combi.subsets(n, "proper"):
        t = trace(seq, J)
        want = sum(j - i for (i, j), c in zip(seq.comps, t.colors) if c == 1)
        assert P.entry(combi.subset_label(J), ident) == want


def test_invalid_network_rejected():
    bad = ComparatorSeq(3, ((1, 2),))
    for fn in (perm_factorization, one_round_protocol, two_round_protocol, goemans_build):
        with pytest.raises(ValueError):
            fn(bad)


@pytest.mark.parametrize("kind", ["quadratic", "batcher"])
@pytest.mark.parametrize("n", [3, 4])
def test_protocols_agree_cell_by_cell(kind, n):
    seq = generate(kind, n)
    p1, p2 = one_round_protocol(seq), two_round_protocol(seq)
    s = slack_perm(n).matrix
    for J in combi.subsets(n, "proper"):
        x = combi.subset_label(J)
        for w in combi.perms(n):
            y = combi.perm_label(w)
            a = exact_expectation(p1, x, y)
            assert a == exact_expectation(p2, x, y) == delta_sum(seq, J, w) == s.entry(x, y)
    assert compile_factorization(p1).size <= 2 * seq.q


def test_one_round_exhaustive_n3():
    p = one_round_protocol(quadratic(3))
    assert check_correct(p, slack_perm(3).matrix) is None
    f = compile_factorization(p)
    assert f.size == 6 and f.verify(slack_perm(3).matrix) is None


@pytest.mark.parametrize("n", range(3, 9))
def test_no_zero_paths_for_quadratic(n):
    assert zero_path_scan(quadratic(n)) == {"A_zero_columns": [], "B_zero_rows": []}


@pytest.mark.parametrize("n", range(3, 9))
def test_quadratic_fooling_set(n):
    A = perm_a_matrix(quadratic(n))
    F = quadratic_fooling_set(n)
    assert len(F) == n * (n - 1) == A.shape[1]
    assert fooling_verify(A, F)


def test_fooling_small_cases():
    eye = RatMatrix.from_rows([[1, 0], [0, 1]])
    ones = RatMatrix.from_rows([[1, 1], [1, 1]])
    diag = FoolingSet((("0", "0"), ("1", "1")))
    assert fooling_verify(eye, diag)
    assert not fooling_verify(ones, diag)
    with pytest.raises(KeyError):
        fooling_verify(eye, FoolingSet((("7", "0"),)))


def test_goemans_shapes():
    seq = quadratic(4)
    system = goemans_build(seq)
    assert system.dim == 4 * 7
    assert len(system.inequalities) == 2 * seq.q
    assert len(system.equalities) == 4 + seq.q * (4 - 1)


def test_lift_example():
    seq = quadratic(3)
    w = lift_sigma(seq, (2, 1, 3))
    assert stages(seq, w) == [(2, 1, 3), (2, 1, 3), (1, 2, 3), (1, 2, 3)]
    assert goemans_build(seq).feasible(w)
    assert project(seq, w) == (2, 1, 3)
    assert len(tilde_project(seq, w)) == 9
    assert tilde_roundtrip(seq, w)
    ident = lift_sigma(seq, (1, 2, 3))
    assert set(stages(seq, ident)) == {(1, 2, 3)}
    assert tilde_roundtrip(seq, ident)


@pytest.mark.parametrize("kind", ["quadratic", "oddeven", "batcher"])
def test_every_lift_n4(kind):
    assert list(goemans_verify(generate(kind, 4), samples=30, seed=5)) == []


def test_perturbed_point_is_rejected():
    seq = quadratic(3)
    w = list(lift_sigma(seq, (3, 1, 2)))
    w[4] += Fraction(1, 2)
    system = goemans_build(seq)
    assert not system.feasible(w)
    with pytest.raises(ValueError):
        tilde_roundtrip(seq, w, system)


def test_tilde_constraints_detect_violation():
    seq = quadratic(3)
    wt = list(tilde_project(seq, lift_sigma(seq, (2, 3, 1))))
    assert tilde_feasible(seq, wt)
    wt[3], wt[4] = wt[4], wt[3]
    assert not tilde_feasible(seq, wt)


def test_edmonds_examples():
    assert edmonds_membership((2, 1, 3))
    assert not edmonds_membership((0, 0, 6))
    assert edmonds_membership((2, 2, 2))
    assert not edmonds_membership((1, 2, 4))


@given(st.lists(st.fractions(min_value=0, max_value=6, max_denominator=4), min_size=2, max_size=6))
def test_edmonds_fast_matches_bruteforce(x):
    n = len(x)
    shift = (Fraction(n * (n + 1), 2) - sum(x)) / n
    x = [v + shift for v in x]
    assert edmonds_membership(x) == edmonds_membership_bruteforce(x)


@given(st.integers(0, 10**6))
def test_convex_combinations(seed):
    seq = generate("batcher", 5)
    system = goemans_build(seq)
    w = random_convex_lift(seq, random.Random(seed), terms=4)
    assert system.feasible(w)
    assert edmonds_membership(project(seq, w))
    assert tilde_roundtrip(seq, w, system)
    assert mk_monotone(seq, w)


def test_min_k_sums():
    assert min_k_sums((3, 1, 2)) == [1, 3, 6]
