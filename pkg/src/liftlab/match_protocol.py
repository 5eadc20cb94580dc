"""Nonnegative factorization of the matching-polytope slack matrix.

Message paths come in five kinds.  ``e{u,v}`` and ``v<u>`` carry the
x_e >= 0 and degree rows directly.  For an odd set U, Bob announces the size
k of his matching and the index j of the first X_j in T_k compatible with
it.  Alice takes Z, the side of X_j holding fewer vertices of U.  If that
side is empty she stops and claims (|U|-1)/2; otherwise she sends a uniform
u in Z cap U, Bob returns the partner u' of u (or u itself when u is
exposed), and Alice claims (|U|-1)/2 - |Z cap U| if u' lies in U minus u,
else (|U|-1)/2.  The empty matching has its own stop path.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from . import combi
from .combi import Graph
from .cover import build_all_Tk, compatible
from .exactnum import RatMatrix, ln_bounds
from .protocol import Factorization
from .slack import match_row_label, match_rows


Tks = Mapping[int, Sequence[frozenset[int]]]


def path_label(kind: str, *key) -> str:
    if kind == "edge":
        return "e" + combi.edge_label(key[0])
    if kind == "vertex":
        return f"v{key[0]}"
    return kind + "(" + ",".join(map(str, key)) + ")"


def alice_side(U: frozenset[int], X: frozenset[int]) -> frozenset[int] | None:
    """Z, the side of X holding fewer vertices of U; None when Alice stops."""
    inside, outside = U & X, U - X
    if not inside or not outside:
        return None
    return inside if len(inside) < len(outside) else outside


def alice_start(U: frozenset[int], X: frozenset[int]) -> dict[int, Fraction]:
    """Alice's law of u given (U, X_j); empty when she stops."""
    Z = alice_side(U, X)
    if Z is None:
        return {}
    return {u: Fraction(1, len(Z)) for u in sorted(Z)}


def alice_claim(U: frozenset[int], Z: frozenset[int], u: int, u2: int) -> Fraction:
    half = Fraction(len(U) - 1, 2)
    if u2 != u and u2 in U:
        return half - len(Z)
    return half


def bob_answer(n: int, matching: Sequence[tuple[int, int]], u: int) -> int:
    """Partner of u in the matching, or u itself when u is exposed."""
    p = combi.partner(n, matching, u)
    return u if p is None else p


def first_compatible(family: Sequence[frozenset[int]], matching) -> int | None:
    for j, X in enumerate(family):
        if compatible(X, matching):
            return j
    return None


def conditional_claim(n: int, U: frozenset[int], X: frozenset[int], matching) -> Fraction:
    """Expected claim once Bob has pointed at X (any X compatible with the matching)."""
    if not compatible(X, matching):
        raise ValueError("X is not compatible with the matching")
    Z = alice_side(U, X)
    if Z is None:
        return Fraction(len(U) - 1, 2)
    return sum((p * alice_claim(U, Z, u, bob_answer(n, matching, u))
                for u, p in alice_start(U, X).items()), Fraction(0))


def _check_cover(g: Graph, tks: Tks) -> dict[tuple, tuple[int, int]]:
    """Bob's deterministic (k, j) for every nonempty matching of g."""
    choice = {}
    for m in combi.matchings(g):
        if not m:
            continue
        k = len(m)
        j = first_compatible(tks.get(k, ()), m)
        if j is None:
            raise ValueError(f"T_{k} does not cover matching {combi.matching_label(m)}")
        choice[m] = (k, j)
    return choice


def match_factorization(g: Graph, tks: Tks | None = None) -> Factorization:
    """Factors A (slack rows by paths) and B (paths by matchings), all-zero paths removed."""
    n = g.n
    if n > 10:
        raise ValueError(f"match_factorization supports n <= 10, got {n}")
    if tks is None:
        tks = build_all_Tk(n) if n >= 2 else {}
    ms = combi.matchings(g)
    choice = _check_cover(g, tks)
    rows = match_rows(g)

    paths: list[tuple] = [("edge", e) for e in g.edges]
    paths += [("vertex", v) for v in g.vertices]
    paths.append(("stop", 0, 0))
    for k in sorted(tks):
        for j in range(len(tks[k])):
            paths.append(("stop", k, j))
            paths += [("pair", k, j, u, u2) for u in g.vertices for u2 in g.vertices]
    where = {p: c for c, p in enumerate(paths)}

    a = [[Fraction(0)] * len(paths) for _ in rows]
    for r, (kind, key) in enumerate(rows):
        if kind == "edge":
            a[r][where[("edge", key)]] = Fraction(1)
        elif kind == "vertex":
            a[r][where[("vertex", key)]] = Fraction(1)
        else:
            U = key
            half = Fraction(len(U) - 1, 2)
            a[r][where[("stop", 0, 0)]] = half
            for k in sorted(tks):
                for j, X in enumerate(tks[k]):
                    Z = alice_side(U, X)
                    if Z is None:
                        a[r][where[("stop", k, j)]] = half
                        continue
                    for u, p in alice_start(U, X).items():
                        for u2 in g.vertices:
                            a[r][where[("pair", k, j, u, u2)]] = p * alice_claim(U, Z, u, u2)

    b = [[Fraction(0)] * len(ms) for _ in paths]
    for c, m in enumerate(ms):
        mset = set(m)
        for e in g.edges:
            if e in mset:
                b[where[("edge", e)]][c] = Fraction(1)
        covered = {v for e in m for v in e}
        for v in g.vertices:
            if v not in covered:
                b[where[("vertex", v)]][c] = Fraction(1)
        if not m:
            b[where[("stop", 0, 0)]][c] = Fraction(1)
            continue
        k, j = choice[m]
        b[where[("stop", k, j)]][c] = Fraction(1)
        for u in g.vertices:
            b[where[("pair", k, j, u, bob_answer(n, m, u))]][c] = Fraction(1)

    keep = [c for c in range(len(paths)) if any(row[c] for row in a) and any(b[c])]
    A = RatMatrix(tuple(match_row_label(kind, key) for kind, key in rows),
                  tuple(path_label(*paths[c]) for c in keep),
                  tuple(tuple(row[c] for c in keep) for row in a))
    B = RatMatrix(tuple(path_label(*paths[c]) for c in keep),
                  tuple(combi.matching_label(m) for m in ms),
                  tuple(tuple(b[c]) for c in keep))
    return Factorization(A, B)


class WidthReport(NamedTuple):
    width: int
    bound: Fraction
    within: bool


def width_bound(n: int) -> Fraction:
    """n^3 ln(n) 1.5^n with ln n replaced by a rational lower bound."""
    lo, _ = ln_bounds(n) if n >= 2 else (Fraction(0), Fraction(0))
    return n**3 * lo * Fraction(3, 2) ** n


def match_width_report(g: Graph, tks: Tks | None = None,
                       factorization: Factorization | None = None) -> WidthReport:
    f = factorization or match_factorization(g, tks)
    bound = width_bound(g.n)
    return WidthReport(f.size, bound, f.size <= bound)


def protocol_width_estimate(n: int, tks: Tks) -> int:
    """|E| + |V| + n(n-1) * sum_k |T_k| for K_n, the path count before sentinel and stop paths."""
    return math.comb(n, 2) + n + n * (n - 1) * sum(len(f) for f in tks.values())
