from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftlab import combi
from liftlab.slack import birkhoff_project, slack_match, slack_perm, slack_spt


def test_perm_hand_values():
    m = slack_perm(3).matrix
    assert m.shape == (6, 6)
    assert m.entry("{1}", "213") == 1
    assert m.entry("{1,2}", "312") == 1
    assert m.entry("{2,3}", "123") == 2


@pytest.mark.parametrize("n", range(2, 7))
def test_perm_columns_have_exactly_n_minus_1_tight_rows(n):
    m = slack_perm(n).matrix
    assert m.is_nonnegative()
    for j, word in enumerate(combi.perms(n)):
        tight = {m.row_labels[i] for i in range(m.shape[0]) if m.entries[i][j] == 0}
        inverse = sorted(range(1, n + 1), key=lambda t: word[t - 1])
        want = {combi.subset_label(inverse[:k]) for k in range(1, n)}
        assert tight == want


def test_perm_size_guard():
    with pytest.raises(ValueError):
        slack_perm(9)


def test_spt_k3():
    m = slack_spt(combi.complete_graph(3)).matrix
    assert m.row_labels == ("{1,2}", "{1,3}", "{2,3}")
    assert m.col_labels == ("{{1,2},{1,3}}", "{{1,2},{2,3}}", "{{1,3},{2,3}}")
    assert [[int(v) for v in r] for r in m.entries] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_spt_nonneg_block_and_guards():
    s = slack_spt(combi.complete_graph(4), nonneg_rows=True)
    assert s.row_kinds[:6] == ("edge",) * 6
    assert s.matrix.row_labels[0] == "e{1,2}" and s.matrix.row_labels[6] == "{1,2}"
    with pytest.raises(ValueError):
        slack_spt(combi.Graph(4, ((1, 2), (3, 4))))


def test_match_k3():
    m = slack_match(combi.complete_graph(3)).matrix
    assert m.col_labels == ("{}", "{{1,2}}", "{{1,3}}", "{{2,3}}")
    assert m.row_labels == ("{1,2}", "{1,3}", "{2,3}", "1", "2", "3", "{1,2,3}")
    assert [int(v) for v in m.entries[-1]] == [1, 0, 0, 0]
    assert [int(v) for v in m.entries[3]] == [1, 0, 0, 1]


@given(st.integers(3, 7))
def test_match_slack_bounds(n):
    m = slack_match(combi.complete_graph(n))
    for kind, row in zip(m.row_kinds, m.matrix.entries):
        assert all(0 <= v <= Fraction(n - 1, 2) for v in row)
        if kind != "odd_set":
            assert set(row) <= {0, 1}


def test_match_includes_full_odd_vertex_set():
    rows = slack_match(combi.complete_graph(5)).matrix.row_labels
    assert "{1,2,3,4,5}" in rows


@given(st.permutations(range(1, 7)))
def test_birkhoff_projection(word):
    assert birkhoff_project(tuple(word)) == tuple(word)
