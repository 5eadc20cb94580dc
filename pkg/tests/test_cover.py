import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liftlab import combi
from liftlab.cover import (Hypergraph, brute_nu_tau, build_Tk, compatible, fractional_cost,
                           greedy_cover, harmonic_check, is_cover, matching_hypergraph, tk_bound,
                           tk_from_json, tk_to_json)


@st.composite
def hypergraphs(draw, max_v=12, max_e=12):
    nv = draw(st.integers(1, max_v))
    edges = draw(st.lists(st.frozensets(st.integers(0, nv - 1), min_size=1), min_size=1, max_size=max_e))
    return Hypergraph.from_edges(nv, edges)


def test_h1_for_k4_greedy_size_3():
    h = matching_hypergraph(4, 1)
    assert (h.num_vertices, len(h.edges)) == (4, 6)
    assert greedy_cover(h).size == 3


def test_single_edge_and_triangle():
    one = Hypergraph.from_edges(2, [{0, 1}])
    c = greedy_cover(one)
    assert c.size == 1 and fractional_cost(one, [1, 1]) == 2 and harmonic_check(one, c, [1, 1])
    tri = Hypergraph.from_edges(3, [{0, 1}, {1, 2}, {0, 2}])
    c = greedy_cover(tri)
    half = [Fraction(1, 2)] * 3
    assert c.size == 2 and tri.max_degree == 2
    assert fractional_cost(tri, half) == Fraction(3, 2)
    assert harmonic_check(tri, c, half)


def test_lowest_index_tie_break():
    h = Hypergraph.from_edges(3, [{0, 1, 2}])
    assert greedy_cover(h).picked == (0,)


def test_infeasible_fractional_cover_rejected():
    h = Hypergraph.from_edges(2, [{0, 1}])
    with pytest.raises(ValueError):
        fractional_cost(h, [Fraction(1, 3), Fraction(1, 3)])


@given(hypergraphs())
def test_greedy_trace_properties(h):
    c = greedy_cover(h)
    assert is_cover(h, c.picked)
    assert list(c.degrees) == sorted(c.degrees, reverse=True)
    assert sum(k * t for k, t in c.counts_by_degree().items()) == len(h.edges)
    assert harmonic_check(h, c, [1] * h.num_vertices)


@given(hypergraphs(max_v=8, max_e=8))
def test_brute_force_duality_and_greedy(h):
    nu, tau = brute_nu_tau(h)
    assert nu <= tau <= greedy_cover(h).size


def test_matching_hypergraph_matches_definition():
    n, k = 6, 2
    h = matching_hypergraph(n, k)
    xs = combi.subsets(n, "size", k)
    ms = combi.matchings(combi.complete_graph(n), size=k)
    for m, e in zip(ms, h.edges):
        assert e == frozenset(i for i, x in enumerate(xs) if compatible(x, m))
        assert len(e) == 2 ** k
    assert set(h.degrees()) == {math.factorial(n - k) // math.factorial(n - 2 * k)}


@pytest.mark.parametrize("n,k,size", [(2, 1, 1), (4, 1, 3), (6, 1, 5)])
def test_tk_small_sizes(n, k, size):
    assert len(build_Tk(n, k)) == size


def test_t3_for_n6_equals_the_exact_cover_number():
    fam = build_Tk(6, 3)
    nu, tau = brute_nu_tau(matching_hypergraph(6, 3))
    assert len(fam) == tau == 4
    assert fam == [frozenset(s) for s in ([1, 2, 3], [1, 2, 4], [1, 3, 5], [1, 4, 5])]


@pytest.mark.parametrize("n", range(2, 10))
def test_tk_cover_and_bound(n):
    for k in range(1, n // 2 + 1):
        fam = build_Tk(n, k)
        assert len(fam) <= tk_bound(n, k)
        for m in combi.matchings(combi.complete_graph(n), size=k):
            assert any(compatible(x, m) for x in fam)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 9) for k in range(1, min(4, n // 2) + 1)])
def test_harmonic_check_with_uniform_fractional_cover(n, k):
    h = matching_hypergraph(n, k)
    assert harmonic_check(h, greedy_cover(h), [Fraction(1, 2 ** k)] * h.num_vertices)


def test_tk_json_roundtrip_and_errors():
    fam = build_Tk(6, 2)
    n, k, back = tk_from_json(tk_to_json(6, 2, fam))
    assert (n, k, back) == (6, 2, fam)
    with pytest.raises(ValueError):
        tk_from_json('{"n": 6, "k": 2, "sets": [[1, 2, 3]]}')
    with pytest.raises(ValueError):
        tk_from_json('{"n": 6}')


def test_tk_guards():
    with pytest.raises(ValueError):
        build_Tk(13, 1)
    with pytest.raises(ValueError):
        build_Tk(6, 4)
