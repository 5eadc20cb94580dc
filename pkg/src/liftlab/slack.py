"""Exact slack matrices of the permutahedron, spanning-tree and matching polytopes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import combi
from .combi import Graph
from .exactnum import RatMatrix


@dataclass(frozen=True)
class SlackMatrix:
    """A slack matrix together with the polytope it came from.

    ``row_kinds[i]`` says which block row ``i`` belongs to: ``"edge"``,
    ``"vertex"``, ``"odd_set"`` or ``"subset_U"``.
    """

    matrix: RatMatrix
    polytope: str
    row_kinds: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.row_kinds) != self.matrix.shape[0]:
            raise ValueError("one row kind per row required")
        if not self.matrix.is_nonnegative():
            raise ValueError(f"slack matrix of {self.polytope} has a negative entry")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def slack_perm(n: int) -> SlackMatrix:
    """Slack of Perm(n): rows proper nonempty J, columns sigma.

    Entry (J, sigma) is sigma(J) - |J|(|J|+1)/2.
    """
    if not isinstance(n, int) or not 2 <= n <= 8:
        raise ValueError(f"slack_perm supports 2 <= n <= 8, got {n!r}")
    rows = combi.subsets(n, "proper")
    cols = combi.perms(n)
    grid = []
    for J in rows:
        base = len(J) * (len(J) + 1) // 2
        idx = [j - 1 for j in J]
        grid.append(tuple(Fraction(sum(w[i] for i in idx) - base) for w in cols))
    m = RatMatrix(tuple(combi.subset_label(J) for J in rows),
                  tuple(combi.perm_label(w) for w in cols), tuple(grid))
    return SlackMatrix(m, f"perm({n})", ("subset_U",) * len(rows))


def spt_rows(g: Graph) -> list[frozenset[int]]:
    """Subsets U of V, U != V, |U| >= 2, with at least one induced edge."""
    return [U for U in combi.subsets(g.n, "proper") if len(U) >= 2 and g.induced_edges(U)]


def slack_spt(g: Graph, nonneg_rows: bool = False) -> SlackMatrix:
    """Slack of the spanning-tree polytope of a connected graph.

    Rows are the constraints x(E(U)) <= |U| - 1; with ``nonneg_rows`` the
    x_e >= 0 rows (slack chi_T(e)) are prepended as an ``edge`` block
    labeled ``e{u,v}`` so they cannot clash with the 2-element subsets.
    """
    if g.n > 7:
        raise ValueError(f"slack_spt supports n <= 7, got {g.n}")
    if not g.is_connected():
        raise ValueError("spanning-tree polytope needs a connected graph")
    trees = combi.spanning_trees(g)
    tree_sets = [set(t) for t in trees]
    labels, kinds, grid = [], [], []
    if nonneg_rows:
        for e in g.edges:
            labels.append("e" + combi.edge_label(e))
            kinds.append("edge")
            grid.append(tuple(Fraction(int(e in t)) for t in tree_sets))
    for U in spt_rows(g):
        inner = g.induced_edges(U)
        labels.append(combi.subset_label(U))
        kinds.append("subset_U")
        grid.append(tuple(Fraction(len(U) - 1 - sum(e in t for e in inner))
                          for t in tree_sets))
    m = RatMatrix(tuple(labels), tuple(combi.tree_label(t) for t in trees), tuple(grid))
    return SlackMatrix(m, f"spt(n={g.n},m={len(g.edges)})", tuple(kinds))


def match_rows(g: Graph) -> list[tuple[str, object]]:
    """Row keys of the matching slack matrix in block order."""
    rows: list[tuple[str, object]] = [("edge", e) for e in g.edges]
    rows += [("vertex", v) for v in g.vertices]
    rows += [("odd_set", U) for U in combi.subsets(g.n, "odd3") if g.induced_edges(U)]
    return rows


def match_row_label(kind: str, key) -> str:
    if kind == "edge":
        return combi.edge_label(key)
    if kind == "vertex":
        return str(key)
    return combi.subset_label(key)


def slack_match(g: Graph) -> SlackMatrix:
    """Slack of the matching polytope against every matching, the empty one included.

    Row blocks: x_e >= 0 (slack chi_M(e)), x(delta(v)) <= 1 (slack
    1 - |M cap delta(v)|), x(E(U)) <= (|U|-1)/2 for odd |U| >= 3.
    """
    if g.n > 10:
        raise ValueError(f"slack_match supports n <= 10, got {g.n}")
    ms = combi.matchings(g)
    msets = [set(m) for m in ms]
    covered = [{v for e in m for v in e} for m in ms]
    labels, kinds, grid = [], [], []
    for kind, key in match_rows(g):
        labels.append(match_row_label(kind, key))
        kinds.append(kind)
        if kind == "edge":
            row = [Fraction(int(key in m)) for m in msets]
        elif kind == "vertex":
            row = [Fraction(int(key not in c)) for c in covered]
        else:
            inner = g.induced_edges(key)
            half = Fraction(len(key) - 1, 2)
            row = [half - sum(e in m for e in inner) for m in msets]
        grid.append(tuple(row))
    m = RatMatrix(tuple(labels), tuple(combi.matching_label(x) for x in ms), tuple(grid))
    return SlackMatrix(m, f"match(n={g.n},m={len(g.edges)})", tuple(kinds))


def birkhoff_project(word: tuple[int, ...]) -> tuple[int, ...]:
    """Project the permutation matrix of ``word`` with M @ (1, ..., n)."""
    if not combi.is_perm(word):
        raise ValueError(f"{word!r} is not a permutation")
    n = len(word)
    matrix = [[int(word[i] == c + 1) for c in range(n)] for i in range(n)]
    image = tuple(sum(matrix[i][c] * (c + 1) for c in range(n)) for i in range(n))
    assert image == tuple(word), "Birkhoff projection must recover x_sigma"
    return image
