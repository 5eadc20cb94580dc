"""Comparator networks: forward and reverse operators, validity, traces, generators.

A comparator (i, j) with i < j acts on a vector in one of two directions.
Forward puts the smaller value at i and the larger at j; reverse does the
opposite.  Subsets J of [n] are handled through their 0/1 indicator vectors,
so ``sigma^-(J)`` is the set whose indicator is the image of ``chi_J``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import combi
from .exactnum import as_rational

FORWARD = "forward"
REVERSE = "reverse"
MAX_CHECK_N = 24


@dataclass(frozen=True)
class ComparatorSeq:
    n: int
    comps: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"network width must be a positive integer, got {self.n!r}")
        comps = tuple((int(i), int(j)) for i, j in self.comps)
        for i, j in comps:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"comparator ({i},{j}) needs 1 <= i < j <= {self.n}")
        object.__setattr__(self, "comps", comps)

    @property
    def q(self) -> int:
        return len(self.comps)

    def __len__(self) -> int:
        return len(self.comps)

    def without(self, drop: Iterable[int]) -> "ComparatorSeq":
        gone = set(drop)
        return ComparatorSeq(self.n, tuple(c for l, c in enumerate(self.comps) if l not in gone))

    def with_appended(self, *comps: tuple[int, int]) -> "ComparatorSeq":
        return ComparatorSeq(self.n, self.comps + tuple(comps))


def _check_direction(direction: str) -> None:
    if direction not in (FORWARD, REVERSE):
        raise ValueError(f"direction must be {FORWARD!r} or {REVERSE!r}, got {direction!r}")


def compare(x: Sequence, i: int, j: int, direction: str = FORWARD) -> list:
    """One conditional reflection on a copy of ``x`` (1-based i < j)."""
    out = list(x)
    a, b = out[i - 1], out[j - 1]
    lo, hi = (a, b) if a <= b else (b, a)
    if direction == FORWARD:
        out[i - 1], out[j - 1] = lo, hi
    else:
        out[i - 1], out[j - 1] = hi, lo
    return out


def apply_network(seq: ComparatorSeq, x: Sequence, direction: str = FORWARD) -> list:
    """Run every comparator of ``seq`` in list order."""
    _check_direction(direction)
    if len(x) != seq.n:
        raise ValueError(f"vector of length {len(x)} given to a width-{seq.n} network")
    out = list(x)
    for i, j in seq.comps:
        out = compare(out, i, j, direction)
    return out


def apply_to_set(seq: ComparatorSeq, J: Iterable[int], direction: str = REVERSE) -> frozenset[int]:
    """Image of a subset through its indicator vector."""
    _check_direction(direction)
    bits = _apply_mask(seq.comps, combi.mask(J), direction)
    return combi.from_mask(bits)


def _apply_mask(comps: Sequence[tuple[int, int]], bits: int, direction: str) -> int:
    for i, j in comps:
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        if direction == FORWARD:
            if bits & bi and not bits & bj:
                bits ^= bi | bj
        elif bits & bj and not bits & bi:
            bits ^= bi | bj
    return bits


def _target_mask(n: int, size: int, direction: str) -> int:
    if direction == FORWARD:
        return ((1 << size) - 1) << (n - size)
    return (1 << size) - 1


def _is_target(bits: int, n: int, direction: str) -> bool:
    return bits == _target_mask(n, bin(bits).count("1"), direction)


def is_sorting_network(seq: ComparatorSeq, direction: str = FORWARD) -> bool:
    """Exhaustive 0/1 check: every indicator vector must land on its target.

    Forward targets have their ones at the top indices, reverse targets at
    the bottom indices.  Vectors are processed in numpy blocks.
    """
    _check_direction(direction)
    n = seq.n
    if n > MAX_CHECK_N:
        raise ValueError(f"0/1 check supports n <= {MAX_CHECK_N}, got {n}")
    block = 1 << min(n, 16)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, block):
        codes = np.arange(start, min(start + block, 1 << n), dtype=np.int64)
        x = ((codes[:, None] >> shifts) & 1).astype(bool)
        for i, j in seq.comps:
            a, b = x[:, i - 1].copy(), x[:, j - 1]
            if direction == FORWARD:
                x[:, i - 1] = a & b
                x[:, j - 1] = a | b
            else:
                x[:, i - 1] = a | b
                x[:, j - 1] = a & b
        steps = np.diff(x.view(np.int8), axis=1)
        if direction == FORWARD and (steps < 0).any():
            return False
        if direction == REVERSE and (steps > 0).any():
            return False
    return True


def sorts_all_permutations(seq: ComparatorSeq, direction: str = FORWARD) -> bool:
    """Brute-force oracle: run every permutation of 1..n through the network."""
    _check_direction(direction)
    if seq.n > 8:
        raise ValueError("permutation check supports n <= 8")
    want = list(range(1, seq.n + 1))
    if direction == REVERSE:
        want.reverse()
    return all(apply_network(seq, w, direction) == want
               for w in itertools.permutations(range(1, seq.n + 1)))


def duality_check(seq: ComparatorSeq) -> bool:
    """Forward sorts iff reverse sorts, and sigma^-(J^c) = (sigma^+(J))^c for every J."""
    if seq.n > 20:
        raise ValueError("duality check supports n <= 20")
    full = (1 << seq.n) - 1
    for bits in range(1 << seq.n):
        fwd = _apply_mask(seq.comps, bits, FORWARD)
        rev = _apply_mask(seq.comps, full ^ bits, REVERSE)
        if rev != full ^ fwd:
            return False
    return is_sorting_network(seq, FORWARD) == is_sorting_network(seq, REVERSE)


class DeltaMismatch(AssertionError):
    """The two formulas for delta disagree, which means an implementation bug."""


def subset_sum(x: Sequence, J: Iterable[int]) -> Fraction:
    return sum((as_rational(x[t - 1]) for t in J), Fraction(0))


def delta(i: int, j: int, sigma: Sequence, J: Iterable[int]) -> Fraction:
    """Slack decrement of one comparator, computed twice and cross-checked.

    ``sigma`` may be any rational vector (a permutation word in particular).
    """
    n = len(sigma)
    if not 1 <= i < j <= n:
        raise ValueError(f"comparator ({i},{j}) needs 1 <= i < j <= {n}")
    J = frozenset(J)
    moved = apply_to_set(ComparatorSeq(n, ((i, j),)), J, REVERSE)
    definitional = subset_sum(sigma, J) - subset_sum(compare(sigma, i, j, FORWARD), moved)
    si, sj = as_rational(sigma[i - 1]), as_rational(sigma[j - 1])
    closed = Fraction(0)
    if j in J and i not in J:
        closed += max(sj - si, 0)
    if i in J and j not in J:
        closed += max(si - sj, 0)
    if definitional != closed:
        raise DeltaMismatch(f"delta({i},{j}) at J={sorted(J)}: {definitional} != {closed}")
    return closed


class JTrace(NamedTuple):
    sets: tuple[frozenset[int], ...]
    colors: tuple[int, ...]

    def part_sizes(self) -> dict[int, int]:
        """|A_-1|, |A_0|, |A_1| keyed by color."""
        return {c: self.colors.count(c) for c in (-1, 0, 1)}


class SigmaTrace(NamedTuple):
    perms: tuple[tuple, ...]
    w: tuple


def color(i: int, j: int, J: frozenset[int]) -> int:
    return int(j in J and i not in J) - int(i in J and j not in J)


def trace(seq: ComparatorSeq, J: Iterable[int]) -> JTrace:
    """Sets J_0..J_q under the reverse operator and the color of every step."""
    cur = frozenset(J)
    sets, colors = [cur], []
    for i, j in seq.comps:
        colors.append(color(i, j, cur))
        cur = apply_to_set(ComparatorSeq(seq.n, ((i, j),)), cur, REVERSE)
        sets.append(cur)
    return JTrace(tuple(sets), tuple(colors))


def colors(seq: ComparatorSeq, J: Iterable[int]) -> tuple[int, ...]:
    """Colors only, keeping a single bitmask in memory."""
    bits = combi.mask(J)
    out = []
    for i, j in seq.comps:
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        out.append(int(bool(bits & bj) and not bits & bi) - int(bool(bits & bi) and not bits & bj))
        if bits & bj and not bits & bi:
            bits ^= bi | bj
    return tuple(out)


def trace_sigma(seq: ComparatorSeq, sigma: Sequence) -> SigmaTrace:
    """Vectors sigma_0..sigma_q under the forward operator and w_l = sigma_l(j_l) - sigma_l(i_l)."""
    if len(sigma) != seq.n:
        raise ValueError(f"vector of length {len(sigma)} given to a width-{seq.n} network")
    cur = tuple(sigma)
    perms, w = [cur], []
    for i, j in seq.comps:
        w.append(cur[j - 1] - cur[i - 1])
        cur = tuple(compare(cur, i, j, FORWARD))
        perms.append(cur)
    return SigmaTrace(tuple(perms), tuple(w))


def quadratic(n: int) -> ComparatorSeq:
    """(1,n), (1,n-1), ..., (1,2), (2,n), ..., (2,3), ..., (n-1,n)."""
    return ComparatorSeq(n, tuple((i, j) for i in range(1, n) for j in range(n, i, -1)))


def quadratic_position(n: int, i: int, j: int) -> int:
    """0-based position of (i, j) in :func:`quadratic`, in closed form."""
    return i * (n - i) + i * (i + 1) // 2 - j


def oddeven_transposition(n: int) -> ComparatorSeq:
    """n rounds of adjacent comparators, alternating odd and even pairs."""
    return ComparatorSeq(n, tuple((i, i + 1) for r in range(n) for i in range(1 + r % 2, n, 2)))


def batcher(n: int) -> ComparatorSeq:
    """Batcher's merge exchange sort written as a comparator list."""
    comps = []
    if n >= 2:
        t = (n - 1).bit_length()
        p = 1 << (t - 1)
        while p > 0:
            q, r, d = 1 << (t - 1), 0, p
            while True:
                comps += [(i + 1, i + d + 1) for i in range(n - d) if i & p == r]
                if q == p:
                    break
                d, q, r = q - p, q >> 1, p
            p >>= 1
    return ComparatorSeq(n, tuple(comps))


GENERATORS = {
    "quadratic": quadratic,
    "oddeven": oddeven_transposition,
    "oddeven_transposition": oddeven_transposition,
    "batcher": batcher,
}


def generate(kind: str, n: int) -> ComparatorSeq:
    if kind not in GENERATORS:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"generators need n >= 2, got {n!r}")
    seq = GENERATORS[kind](n)
    if n <= MAX_CHECK_N and not is_sorting_network(seq):
        raise AssertionError(f"{kind}({n}) failed the 0/1 validity check")
    return seq


class Minimality(NamedTuple):
    minimal: bool
    redundant: tuple[int, ...] | None

    def __str__(self) -> str:
        if self.minimal:
            return "minimal"
        return "redundant comparators at positions " + ",".join(map(str, self.redundant))


def _exhaustive_redundant(seq: ComparatorSeq) -> tuple[int, ...] | None:
    """Smallest-first DFS over keep/drop choices on the image of all 0/1 inputs."""
    n, comps = seq.n, seq.comps
    start = frozenset(range(1 << n))
    failed: set = set()

    def done(state: frozenset) -> bool:
        return all(_is_target(b, n, FORWARD) for b in state)

    def dfs(idx: int, state: frozenset, dropped: tuple[int, ...]) -> tuple[int, ...] | None:
        if idx == len(comps):
            return dropped if dropped and done(state) else None
        key = (idx, state, bool(dropped))
        if key in failed:
            return None
        i, j = comps[idx]
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        # a comparator that never fires on the current image can always be dropped
        if not any(b & bi and not b & bj for b in state):
            return dfs(idx + 1, state, dropped + (idx,))
        found = dfs(idx + 1, state, dropped + (idx,))
        if found is None:
            kept = frozenset(_apply_mask(((i, j),), b, FORWARD) for b in state)
            found = dfs(idx + 1, kept, dropped)
        if found is None:
            failed.add(key)
        return found

    return dfs(0, start, ())


def minimality(seq: ComparatorSeq, mode: str = "one_removal") -> Minimality:
    """Whether some deletion of comparators still sorts.

    ``one_removal`` tries single deletions only, which is a necessary
    condition for minimality and not a sufficient one.  ``exhaustive``
    searches every proper subsequence.
    """
    if not is_sorting_network(seq):
        raise ValueError("minimality is only defined for a sorting network")
    if mode == "one_removal":
        for l in range(seq.q):
            if is_sorting_network(seq.without([l])):
                return Minimality(False, (l,))
        return Minimality(True, None)
    if mode == "exhaustive":
        if seq.q > 22:
            raise ValueError(f"exhaustive minimality supports q <= 22, got {seq.q}")
        found = _exhaustive_redundant(seq)
        return Minimality(found is None, found)
    raise ValueError(f"unknown minimality mode {mode!r}")


def minimality_witness(n: int, k: int, u: int) -> frozenset[int]:
    """J = [k-1] cup {k+u}, left unsorted once (k, k+u) leaves quadratic(n)."""
    if not (1 <= k and u >= 1 and k + u <= n):
        raise ValueError(f"need 1 <= k < k+u <= {n}")
    return frozenset(range(1, k)) | {k + u}


def parse_network(text: str) -> ComparatorSeq:
    """Read ``"n q"`` and then ``q`` lines ``"i j"`` (1-based)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise ValueError("network file must start with 'n q'")
    n, q = map(int, lines[0])
    body = lines[1:]
    if len(body) != q:
        raise ValueError(f"network header announces {q} comparators, found {len(body)}")
    comps = []
    for parts in body:
        if len(parts) != 2:
            raise ValueError(f"bad comparator line {' '.join(parts)!r}")
        comps.append((int(parts[0]), int(parts[1])))
    return ComparatorSeq(n, tuple(comps))


def format_network(seq: ComparatorSeq) -> str:
    return "".join([f"{seq.n} {seq.q}\n"] + [f"{i} {j}\n" for i, j in seq.comps])
