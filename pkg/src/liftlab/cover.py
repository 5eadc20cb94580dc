"""Greedy vertex covers of hypergraphs and the compatibility families T_k.

The greedy cover always takes a vertex covering the most still-uncovered
edges, breaking ties by the lowest vertex index.  Lovász's bound says the
result has at most H(max degree) times the optimal fractional cover cost.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import combi
from .exactnum import as_rational, harmonic, ln_bounds


@dataclass(frozen=True)
class Hypergraph:
    """Vertices ``0..len(vertex_labels)-1``; each edge is a frozenset of vertex indices."""

    vertex_labels: tuple[str, ...]
    edge_labels: tuple[str, ...]
    edges: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        if len(self.edge_labels) != len(self.edges):
            raise ValueError("one label per edge required")
        nv = len(self.vertex_labels)
        for e in self.edges:
            if any(not 0 <= v < nv for v in e):
                raise ValueError("edge refers to an unknown vertex")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        es = tuple(frozenset(e) for e in edges)
        return cls(tuple(str(v) for v in range(num_vertices)),
                   tuple(str(i) for i in range(len(es))), es)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    def incidence(self) -> list[list[bool]]:
        return [[v in e for e in self.edges] for v in range(self.num_vertices)]

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_simple(self) -> bool:
        if len(set(self.edges)) != len(self.edges):
            return False
        rows = [frozenset(i for i, e in enumerate(self.edges) if v in e)
                for v in range(self.num_vertices)]
        return len(set(rows)) == len(rows)


@dataclass(frozen=True)
class CoverResult:
    picked: tuple[int, ...]
    degrees: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.picked)

    def counts_by_degree(self) -> dict[int, int]:
        """t_k: how many picks covered exactly k new edges."""
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def greedy_cover(h: Hypergraph) -> CoverResult:
    """Greedy vertex cover with lowest-index tie breaking.

    Simplicity is not enforced: the T_k hypergraphs at k = n/2 have
    identical rows for X and its complement, and the bound does not need it.
    """
    if any(not e for e in h.edges):
        raise ValueError("an empty edge can never be covered")
    incident: list[set[int]] = [set() for _ in range(h.num_vertices)]
    for i, e in enumerate(h.edges):
        for v in e:
            incident[v].add(i)
    live = [len(s) for s in incident]
    covered = [False] * len(h.edges)
    remaining = len(h.edges)
    picked, degrees = [], []
    while remaining:
        best = max(range(h.num_vertices), key=lambda v: (live[v], -v))
        d = live[best]
        picked.append(best)
        degrees.append(d)
        for i in incident[best]:
            if covered[i]:
                continue
            covered[i] = True
            remaining -= 1
            for v in h.edges[i]:
                live[v] -= 1
    return CoverResult(tuple(picked), tuple(degrees))


def is_cover(h: Hypergraph, vertices: Iterable[int]) -> bool:
    chosen = set(vertices)
    return all(e & chosen for e in h.edges)


def fractional_cost(h: Hypergraph, weights: Sequence) -> Fraction:
    """Cost of a fractional cover, after checking every edge gets weight >= 1."""
    t = [as_rational(w) for w in weights]
    if len(t) != h.num_vertices:
        raise ValueError("one weight per vertex required")
    if any(w < 0 for w in t):
        raise ValueError("fractional cover weights must be nonnegative")
    for label, e in zip(h.edge_labels, h.edges):
        if sum((t[v] for v in e), Fraction(0)) < 1:
            raise ValueError(f"fractional cover is infeasible at edge {label}")
    return sum(t, Fraction(0))


def harmonic_check(h: Hypergraph, cover: CoverResult, weights: Sequence) -> bool:
    """|greedy cover| <= H(max degree) * cost of a feasible fractional cover."""
    cost = fractional_cost(h, weights)
    return cover.size <= harmonic(h.max_degree) * cost


def _max_packing(edges: list[int], used: int = 0, start: int = 0) -> int:
    best = 0
    for i in range(start, len(edges)):
        if edges[i] & used:
            continue
        best = max(best, 1 + _max_packing(edges, used | edges[i], i + 1))
    return best


def brute_nu_tau(h: Hypergraph) -> tuple[int, int]:
    """Exact matching number and cover number by exhaustive search."""
    if h.num_vertices > 20 or len(h.edges) > 20:
        raise ValueError("brute_nu_tau is limited to 20 vertices and 20 edges")
    if any(not e for e in h.edges):
        raise ValueError("an empty edge can never be covered")
    bits = [sum(1 << v for v in e) for e in h.edges]
    nu = _max_packing(bits)
    tau = 0
    for size in range(h.num_vertices + 1):
        if any(all(b & sum(1 << v for v in c) for b in bits)
               for c in itertools.combinations(range(h.num_vertices), size)):
            tau = size
            break
    assert nu <= tau, "weak duality violated"
    return nu, tau


def compatible(x: frozenset[int], matching: Sequence[tuple[int, int]]) -> bool:
    """Every matching edge has exactly one end in ``x``."""
    return all((u in x) != (v in x) for u, v in matching)


def matching_hypergraph(n: int, k: int) -> Hypergraph:
    """H_k: vertices are k-subsets X of [n], edges are size-k matchings of K_n,
    and X lies in M when every edge of M crosses X."""
    xs = combi.subsets(n, "size", k)
    ms = combi.matchings(combi.complete_graph(n), size=k)
    where = {combi.mask(x): i for i, x in enumerate(xs)}
    # with |X| = |M| = k, compatible X are exactly the 2^k endpoint transversals of M
    edges = [frozenset(where[combi.mask(pick)] for pick in itertools.product(*m))
             for m in ms]
    return Hypergraph(tuple(combi.subset_label(x) for x in xs),
                      tuple(combi.matching_label(m) for m in ms), tuple(edges))


def tk_bound(n: int, k: int) -> Fraction:
    """(1 + k ln n) 2^-k C(n, k) with ln n replaced by a rational lower bound."""
    lo, _ = ln_bounds(n)
    return (1 + k * lo) * Fraction(math.comb(n, k), 2**k)


def build_Tk(n: int, k: int) -> list[frozenset[int]]:
    """Greedy family of k-subsets meeting every size-k matching of K_n compatibly.

    The result is listed in pick order.  The cover property is re-checked
    against every matching and the size is checked against the
    (1 + k ln n) 2^-k C(n, k) bound.
    """
    if not 2 <= n <= 12:
        raise ValueError(f"build_Tk supports 2 <= n <= 12, got n={n}")
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must lie in 1..{n // 2}, got {k}")
    h = matching_hypergraph(n, k)
    xs = combi.subsets(n, "size", k)
    result = greedy_cover(h)
    family = [xs[v] for v in result.picked]
    for m in combi.matchings(combi.complete_graph(n), size=k):
        if not any(compatible(x, m) for x in family):
            raise AssertionError(f"matching {combi.matching_label(m)} left uncovered")
    if len(family) > tk_bound(n, k):
        raise AssertionError(f"|T_{k}| = {len(family)} exceeds the harmonic bound")
    return family


def build_all_Tk(n: int) -> dict[int, list[frozenset[int]]]:
    return {k: build_Tk(n, k) for k in range(1, n // 2 + 1)}


def tk_to_json(n: int, k: int, family: Sequence[Iterable[int]]) -> str:
    return json.dumps({"n": n, "k": k, "sets": [sorted(x) for x in family]})


def tk_from_json(text: str) -> tuple[int, int, list[frozenset[int]]]:
    obj = json.loads(text)
    try:
        n, k, sets = int(obj["n"]), int(obj["k"]), obj["sets"]
    except (KeyError, TypeError, ValueError):
        raise ValueError("T_k JSON needs integer 'n', 'k' and a 'sets' list") from None
    family = [frozenset(int(v) for v in s) for s in sets]
    for x in family:
        if len(x) != k or not all(1 <= v <= n for v in x):
            raise ValueError(f"set {sorted(x)} is not a {k}-subset of 1..{n}")
    return n, k, family
