"""Enumeration of permutations, vertex subsets, graphs, matchings and spanning trees.

Vertices are 1-based.  The enumeration orders below are part of the public
contract because they fix the row and column order of every slack matrix:

* permutations: lexicographic by one-line word;
* subsets: by size, then by bitmask (vertex ``i`` is bit ``i-1``);
* matchings: by size, then lexicographic edge list;
* spanning trees: lexicographic edge list.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_PERM_N = 10

Perm = tuple[int, ...]
Edge = tuple[int, int]
Subset = frozenset


def _check_n(n: int, lo: int, hi: int, what: str) -> None:
    if not isinstance(n, int) or not lo <= n <= hi:
        raise ValueError(f"{what}: n={n!r} outside supported range {lo}..{hi}")


def is_perm(word: Sequence[int]) -> bool:
    return sorted(word) == list(range(1, len(word) + 1))


def perms(n: int) -> list[Perm]:
    """All permutations of 1..n as one-line words, lexicographic.

    >>> perms(3)[:2]
    [(1, 2, 3), (1, 3, 2)]
    """
    _check_n(n, 1, MAX_PERM_N, "perms")
    return list(itertools.permutations(range(1, n + 1)))


def mask(subset: Iterable[int]) -> int:
    return sum(1 << (v - 1) for v in subset)


def from_mask(bits: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(bits.bit_length()) if bits >> i & 1)


def subset_key(subset: Iterable[int]) -> tuple[int, int]:
    s = frozenset(subset)
    return len(s), mask(s)


def subsets(n: int, kind: str = "proper", k: int | None = None) -> list[frozenset[int]]:
    """Subsets of [n] in (size, mask) order.

    ``kind`` is ``"proper"`` (nonempty, not all of [n]), ``"odd3"`` (odd size
    at least 3, [n] itself included) or ``"size"`` (exactly ``k`` elements).
    """
    _check_n(n, 1, 24, "subsets")
    if kind == "proper":
        sizes = range(1, n)
    elif kind == "odd3":
        sizes = range(3, n + 1, 2)
    elif kind == "size":
        if k is None or not 0 <= k <= n:
            raise ValueError(f"subset size k={k!r} invalid for n={n}")
        sizes = [k]
    else:
        raise ValueError(f"unknown subset filter {kind!r}")
    out = []
    for size in sizes:
        level = [frozenset(c) for c in itertools.combinations(range(1, n + 1), size)]
        level.sort(key=mask)
        out.extend(level)
    return out


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n with sorted edge list."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            a, b = min(u, v), max(u, v)
            if not (1 <= a and b <= self.n):
                raise ValueError(f"edge {{{u},{v}}} outside 1..{self.n}")
            norm.append((a, b))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def induced_edges(self, subset: Iterable[int]) -> list[Edge]:
        s = set(subset)
        return [e for e in self.edges if e[0] in s and e[1] in s]

    def is_connected(self) -> bool:
        adj = adjacency(self.n, self.edges)
        seen = {1}
        todo = [1]
        while todo:
            u = todo.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == self.n


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(1, n + 1), 2)))


def parse_graph(text: str) -> Graph:
    """Read ``"n m"`` followed by ``m`` lines ``"u v"``."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("graph file must start with 'n m'")
    n, m = map(int, lines[0])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"graph header announces {m} edges, found {len(body)}")
    edges = []
    for parts in body:
        if len(parts) != 2:
            raise ValueError(f"bad edge line {' '.join(parts)!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, tuple(edges))


def adjacency(n: int, edges: Iterable[Edge]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def matchings(g: Graph, size: int | None = None) -> list[tuple[Edge, ...]]:
    """All matchings of ``g`` (the empty one included), ordered by (size, edges)."""
    _check_n(g.n, 1, 16, "matchings")
    found: list[tuple[Edge, ...]] = []

    def grow(start: int, used: int, acc: list[Edge]) -> None:
        found.append(tuple(acc))
        for idx in range(start, len(g.edges)):
            u, v = g.edges[idx]
            bits = (1 << u) | (1 << v)
            if used & bits:
                continue
            acc.append((u, v))
            grow(idx + 1, used | bits, acc)
            acc.pop()

    grow(0, 0, [])
    if size is not None:
        found = [m for m in found if len(m) == size]
    found.sort(key=lambda m: (len(m), m))
    return found


def _acyclic(n: int, edges: Iterable[Edge]) -> bool:
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def spanning_trees(g: Graph) -> list[tuple[Edge, ...]]:
    """All spanning trees of ``g`` as sorted edge tuples, lexicographic."""
    _check_n(g.n, 1, 8, "spanning_trees")
    if g.n == 1:
        return [()]
    return [t for t in itertools.combinations(g.edges, g.n - 1) if _acyclic(g.n, t)]


def is_spanning_tree(n: int, edges: Sequence[Edge]) -> bool:
    return len(edges) == n - 1 and _acyclic(n, edges)


def _check_vertex(n: int, *vs: int) -> None:
    for v in vs:
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} outside 1..{n}")


def _tree_depths(n: int, tree: Sequence[Edge], root: int) -> dict[int, int]:
    adj = adjacency(n, tree)
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in depth:
                depth[w] = depth[u] + 1
                queue.append(w)
    return depth


def tree_distance(n: int, tree: Sequence[Edge], u: int, v: int) -> int:
    _check_vertex(n, u, v)
    depth = _tree_depths(n, tree, u)
    if v not in depth:
        raise ValueError(f"vertices {u} and {v} are not connected in the tree")
    return depth[v]


def orient_toward(n: int, tree: Sequence[Edge], root: int) -> list[tuple[int, int]]:
    """Direct every tree edge so that its head is one step closer to ``root``.

    >>> orient_toward(3, [(1, 2), (2, 3)], 1)
    [(2, 1), (3, 2)]
    """
    _check_vertex(n, root)
    if not is_spanning_tree(n, tree):
        raise ValueError("not a spanning tree")
    depth = _tree_depths(n, tree, root)
    return [(u, v) if depth[u] > depth[v] else (v, u) for u, v in tree]


def partner(n: int, matching: Sequence[Edge], u: int) -> int | None:
    """The vertex matched to ``u``, or None when ``u`` is exposed."""
    _check_vertex(n, u)
    for a, b in matching:
        if a == u:
            return b
        if b == u:
            return a
    return None


# Label formats shared by every serialized matrix.

def perm_label(word: Sequence[int]) -> str:
    if len(word) > 9:
        return " ".join(map(str, word))
    return "".join(map(str, word))


def subset_label(subset: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(subset))) + "}"


def edge_label(edge: Edge) -> str:
    return "{%d,%d}" % edge


def edge_set_label(edges: Iterable[Edge]) -> str:
    return "{" + ",".join(edge_label(e) for e in edges) + "}"


matching_label = edge_set_label
tree_label = edge_set_label


def parse_perm_label(label: str) -> Perm:
    parts = label.split() if " " in label else list(label)
    word = tuple(int(p) for p in parts)
    if not is_perm(word):
        raise ValueError(f"not a permutation label: {label!r}")
    return word


def parse_subset_label(label: str) -> frozenset[int]:
    s = label.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"not a subset label: {label!r}")
    inner = s[1:-1].strip()
    return frozenset(int(x) for x in inner.split(",")) if inner else frozenset()


def parse_edge_set_label(label: str) -> tuple[Edge, ...]:
    s = label.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"not an edge-set label: {label!r}")
    inner = s[1:-1].strip()
    if not inner:
        return ()
    edges = []
    for chunk in inner.split("},"):
        a, b = chunk.strip("{} ").split(",")
        edges.append((int(a), int(b)))
    return tuple(edges)
