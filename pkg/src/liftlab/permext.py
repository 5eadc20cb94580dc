"""Permutahedron extensions built from a sorting network.

Three views of the same network are provided: the 2q-column nonnegative
factorization of the slack matrix (and the protocols it comes from), the
lifted polytope Q_n with one copy of R^n per comparator stage together with
its compressed form in R^(n+2q), and fooling-set certificates for the
nonnegative rank of the left factor.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from . import combi
from .exactnum import RatMatrix, as_rational
from .protocol import Factorization, MarkovianProtocol, node_label
from .slack import slack_perm
from .sortnet import (FORWARD, ComparatorSeq, colors, is_sorting_network,
                      quadratic, quadratic_position, trace_sigma)

EPS = (1, -1)


def _require_sn(seq: ComparatorSeq) -> None:
    if not is_sorting_network(seq, FORWARD):
        raise ValueError("the comparator sequence is not a sorting network")


def path_col_label(l: int, eps: int) -> str:
    return node_label((l, eps))


def _row_sets(n: int) -> list[frozenset[int]]:
    return combi.subsets(n, "proper")


def perm_a_matrix(seq: ComparatorSeq) -> RatMatrix:
    """0/1 matrix: A[J, (l, eps)] = 1 when step l of J's reverse trace has color eps."""
    rows = _row_sets(seq.n)
    labels = tuple(path_col_label(l, e) for l in range(seq.q) for e in EPS)
    grid = []
    for J in rows:
        cs = colors(seq, J)
        grid.append(tuple(Fraction(int(cs[l] == e)) for l in range(seq.q) for e in EPS))
    return RatMatrix(tuple(combi.subset_label(J) for J in rows), labels, tuple(grid))


def perm_b_matrix(seq: ComparatorSeq) -> RatMatrix:
    """B[(l, eps), sigma] = (eps * w_l(sigma))_+ along sigma's forward trace."""
    words = combi.perms(seq.n)
    cols = []
    for w in words:
        ws = trace_sigma(seq, w).w
        cols.append([Fraction(max(e * ws[l], 0)) for l in range(seq.q) for e in EPS])
    labels = tuple(path_col_label(l, e) for l in range(seq.q) for e in EPS)
    grid = tuple(tuple(col[r] for col in cols) for r in range(len(labels)))
    return RatMatrix(labels, tuple(combi.perm_label(w) for w in words), grid)


@dataclass(frozen=True)
class PermFactorization:
    seq: ComparatorSeq
    A: RatMatrix
    B: RatMatrix

    @property
    def factorization(self) -> Factorization:
        return Factorization(self.A, self.B)

    @property
    def size(self) -> int:
        return self.A.shape[1]

    def verify(self):
        return self.factorization.verify(slack_perm(self.seq.n).matrix)


def perm_factorization(seq: ComparatorSeq) -> PermFactorization:
    """Left and right factors of the permutahedron slack, all-zero paths removed."""
    _require_sn(seq)
    if seq.n > 8:
        raise ValueError("perm_factorization supports n <= 8")
    A, B = perm_a_matrix(seq), perm_b_matrix(seq)
    keep = [c for c in range(A.shape[1])
            if any(row[c] for row in A.entries) and any(B.entries[c])]
    return PermFactorization(seq, A.select_columns(keep), B.select_rows(keep))


def zero_path_scan(seq: ComparatorSeq) -> dict[str, list[str]]:
    """Paths whose A column or B row is identically zero, by streaming traces."""
    if seq.n > 8:
        raise ValueError("zero_path_scan supports n <= 8")
    a_hit, b_hit = set(), set()
    for J in _row_sets(seq.n):
        for l, c in enumerate(colors(seq, J)):
            if c:
                a_hit.add((l, c))
    for w in combi.perms(seq.n):
        for l, d in enumerate(trace_sigma(seq, w).w):
            b_hit.add((l, 1 if d > 0 else -1))
    every = [(l, e) for l in range(seq.q) for e in EPS]
    return {"A_zero_columns": [path_col_label(*p) for p in every if p not in a_hit],
            "B_zero_rows": [path_col_label(*p) for p in every if p not in b_hit]}


def delta_sum(seq: ComparatorSeq, J: frozenset[int], sigma: Sequence[int]) -> Fraction:
    """Sum over l of (eps(l, J) * w_l(sigma))_+, the telescoped slack."""
    cs = colors(seq, J)
    ws = trace_sigma(seq, sigma).w
    return sum((Fraction(max(c * w, 0)) for c, w in zip(cs, ws)), Fraction(0))


def one_round_protocol(seq: ComparatorSeq) -> MarkovianProtocol:
    """Alice sends a uniform step l with its color; Bob claims (q * eps * w_l)_+."""
    _require_sn(seq)
    n, q = seq.n, seq.q
    rows = _row_sets(n)
    words = combi.perms(n)
    x_dom = tuple(combi.subset_label(J) for J in rows)
    y_dom = tuple(combi.perm_label(w) for w in words)
    nodes = tuple((l, e) for l in range(q) for e in (1, 0, -1))
    share = Fraction(1, q)
    init = {lab: {(l, c): share for l, c in enumerate(colors(seq, J))}
            for J, lab in zip(rows, x_dom)}
    output = {}
    for w, lab in zip(words, y_dom):
        for l, d in enumerate(trace_sigma(seq, w).w):
            for e in EPS:
                if e * d > 0:
                    output[(lab, (l, e))] = Fraction(q * e * d)
    return MarkovianProtocol((nodes,), x_dom, y_dom, init, (), output,
                             first_speaker="A", claimer="B", name=f"perm1(n={n},q={q})")


STOP = "stop"


def two_round_protocol(seq: ComparatorSeq) -> MarkovianProtocol:
    """Alice sends a uniform step with nonzero color, Bob answers w_l, Alice claims.

    With k nonzero colors Alice claims (k * eps * w)_+; she sends ``stop``
    and claims 0 when every color is 0.
    """
    _require_sn(seq)
    n, q = seq.n, seq.q
    rows = _row_sets(n)
    words = combi.perms(n)
    x_dom = tuple(combi.subset_label(J) for J in rows)
    y_dom = tuple(combi.perm_label(w) for w in words)
    first = tuple(range(q)) + (STOP,)
    second = tuple((l, d) for l in range(q) for d in range(-(n - 1), n) if d) + (STOP,)
    init, output = {}, {}
    for J, lab in zip(rows, x_dom):
        cs = colors(seq, J)
        live = [l for l, c in enumerate(cs) if c]
        if not live:
            init[lab] = {STOP: Fraction(1)}
            continue
        init[lab] = {l: Fraction(1, len(live)) for l in live}
        for l in live:
            for d in range(-(n - 1), n):
                if d and cs[l] * d > 0:
                    output[(lab, (l, d))] = Fraction(len(live) * cs[l] * d)
    kernel = {}
    for w, lab in zip(words, y_dom):
        ws = trace_sigma(seq, w).w
        for l in range(q):
            kernel[(lab, l)] = {(l, ws[l]): Fraction(1)}
        kernel[(lab, STOP)] = {STOP: Fraction(1)}
    return MarkovianProtocol((first, second), x_dom, y_dom, init, (kernel,), output,
                             first_speaker="A", claimer="A", name=f"perm2(n={n},q={q})")


# Goemans lift ------------------------------------------------------------

class Constraint(NamedTuple):
    coeffs: tuple[tuple[int, int], ...]
    rhs: int
    sense: str
    name: str

    def value(self, w: Sequence[Fraction]) -> Fraction:
        return sum((c * w[i] for i, c in self.coeffs), Fraction(0))

    def holds(self, w: Sequence[Fraction]) -> bool:
        v = self.value(w)
        return v == self.rhs if self.sense == "==" else v >= self.rhs


@dataclass(frozen=True)
class GoemansSystem:
    """Q_n: points (y_0, ..., y_q) in R^(n(q+1)), stage k occupying slots k*n .. k*n+n-1.

    The inequalities are the sqrt(2)-scaled forms of <y_{k+1} +- y_k, theta_k> >= 0.
    """

    seq: ComparatorSeq
    equalities: tuple[Constraint, ...]
    inequalities: tuple[Constraint, ...]

    @property
    def dim(self) -> int:
        return self.seq.n * (self.seq.q + 1)

    def violated(self, w: Sequence) -> Constraint | None:
        w = [as_rational(v) for v in w]
        if len(w) != self.dim:
            raise ValueError(f"point of length {len(w)} given to a system of dimension {self.dim}")
        for c in self.equalities + self.inequalities:
            if not c.holds(w):
                return c
        return None

    def feasible(self, w: Sequence) -> bool:
        return self.violated(w) is None


def _slot(n: int, k: int, t: int) -> int:
    return k * n + t - 1


def goemans_build(seq: ComparatorSeq) -> GoemansSystem:
    _require_sn(seq)
    n, q = seq.n, seq.q
    eqs, ineqs = [], []
    for t in range(1, n + 1):
        eqs.append(Constraint(((_slot(n, q, t), 1),), t, "==", f"y_{q}[{t}] = {t}"))
    for k, (i, j) in enumerate(seq.comps):
        for t in range(1, n + 1):
            if t not in (i, j):
                eqs.append(Constraint(((_slot(n, k + 1, t), 1), (_slot(n, k, t), -1)), 0, "==",
                                      f"y_{k + 1}[{t}] = y_{k}[{t}]"))
        eqs.append(Constraint(((_slot(n, k + 1, i), 1), (_slot(n, k + 1, j), 1),
                               (_slot(n, k, i), -1), (_slot(n, k, j), -1)), 0, "==",
                              f"pair sum at stage {k}"))
        for s, tag in ((1, "+"), (-1, "-")):
            ineqs.append(Constraint(((_slot(n, k + 1, j), 1), (_slot(n, k + 1, i), -1),
                                     (_slot(n, k, j), s), (_slot(n, k, i), -s)), 0, ">=",
                                    f"<y_{k + 1} {tag} y_{k}, theta_{k}> >= 0"))
    return GoemansSystem(seq, tuple(eqs), tuple(ineqs))


def lift_sigma(seq: ComparatorSeq, sigma: Sequence[int]) -> tuple[Fraction, ...]:
    """w_sigma: x_sigma followed by its image after each comparator."""
    return tuple(Fraction(v) for stage in trace_sigma(seq, tuple(sigma)).perms for v in stage)


def project(seq: ComparatorSeq, w: Sequence) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in w[:seq.n])


def edmonds_membership(x: Sequence) -> bool:
    """x([n]) = n(n+1)/2 and x(J) >= |J|(|J|+1)/2 for every proper nonempty J."""
    n = len(x)
    if not 1 <= n <= 12:
        raise ValueError(f"edmonds_membership supports 1 <= n <= 12, got {n}")
    x = [as_rational(v) for v in x]
    if sum(x, Fraction(0)) != Fraction(n * (n + 1), 2):
        return False
    # the binding subset of each size is the set of its smallest coordinates
    s = Fraction(0)
    for k, v in enumerate(sorted(x)[:-1], start=1):
        s += v
        if s < Fraction(k * (k + 1), 2):
            return False
    return True


def edmonds_membership_bruteforce(x: Sequence) -> bool:
    """Same test over all 2^n - 2 subsets, used as an oracle."""
    n = len(x)
    x = [as_rational(v) for v in x]
    if sum(x, Fraction(0)) != Fraction(n * (n + 1), 2):
        return False
    return all(sum((x[t - 1] for t in J), Fraction(0)) >= Fraction(len(J) * (len(J) + 1), 2)
               for J in combi.subsets(n, "proper"))


def min_k_sums(y: Sequence) -> list[Fraction]:
    """m_k(y) = smallest sum of k coordinates, for k = 1..n."""
    out, s = [], Fraction(0)
    for v in sorted(as_rational(t) for t in y):
        s += v
        out.append(s)
    return out


def stages(seq: ComparatorSeq, w: Sequence) -> list[tuple[Fraction, ...]]:
    n = seq.n
    return [tuple(as_rational(v) for v in w[k * n:(k + 1) * n]) for k in range(seq.q + 1)]


def mk_monotone(seq: ComparatorSeq, w: Sequence) -> bool:
    ms = [min_k_sums(y) for y in stages(seq, w)]
    return all(a[k] >= b[k] for a, b in zip(ms, ms[1:]) for k in range(seq.n))


def tilde_project(seq: ComparatorSeq, w: Sequence) -> tuple[Fraction, ...]:
    """(y_0, a_1, b_1, ..., a_q, b_q) with (a_k, b_k) the moved pair of stage k."""
    ys = stages(seq, w)
    out = list(ys[0])
    for k, (i, j) in enumerate(seq.comps, start=1):
        out += [ys[k][i - 1], ys[k][j - 1]]
    return tuple(out)


def z_stages(seq: ComparatorSeq, wt: Sequence) -> list[tuple[Fraction, ...]]:
    """z_0 = y_0 and z_m = z_{m-1} with coordinates (i, j) replaced by (a_m, b_m)."""
    n = seq.n
    wt = [as_rational(v) for v in wt]
    if len(wt) != n + 2 * seq.q:
        raise ValueError(f"compressed point must have length {n + 2 * seq.q}")
    cur = list(wt[:n])
    zs = [tuple(cur)]
    for m, (i, j) in enumerate(seq.comps):
        cur[i - 1], cur[j - 1] = wt[n + 2 * m], wt[n + 2 * m + 1]
        zs.append(tuple(cur))
    return zs


def tilde_lift(seq: ComparatorSeq, wt: Sequence) -> tuple[Fraction, ...]:
    return tuple(v for z in z_stages(seq, wt) for v in z)


def tilde_feasible(seq: ComparatorSeq, wt: Sequence) -> bool:
    """z_q = x_id, a_m + b_m = alpha_m + beta_m and b_m >= max(alpha_m, beta_m)."""
    n = seq.n
    zs = z_stages(seq, wt)
    if zs[-1] != tuple(Fraction(t) for t in range(1, n + 1)):
        return False
    for m, (i, j) in enumerate(seq.comps):
        a, b = zs[m + 1][i - 1], zs[m + 1][j - 1]
        alpha, beta = zs[m][i - 1], zs[m][j - 1]
        if a + b != alpha + beta or b < max(alpha, beta):
            return False
    return True


def tilde_roundtrip(seq: ComparatorSeq, w: Sequence, system: GoemansSystem | None = None) -> bool:
    """Compress a feasible point, rebuild it, and check both forms."""
    system = system or goemans_build(seq)
    bad = system.violated(w)
    if bad is not None:
        raise ValueError(f"point is not in Q_n: violates {bad.name}")
    wt = tilde_project(seq, w)
    back = tilde_lift(seq, wt)
    return back == tuple(as_rational(v) for v in w) and tilde_feasible(seq, wt)


def random_convex_lift(seq: ComparatorSeq, rng: random.Random, terms: int = 3
                       ) -> tuple[Fraction, ...]:
    """Rational convex combination of ``terms`` random lifts w_sigma."""
    words = [tuple(rng.sample(range(1, seq.n + 1), seq.n)) for _ in range(terms)]
    weights = [rng.randint(1, 20) for _ in words]
    total = sum(weights)
    lifts = [lift_sigma(seq, w) for w in words]
    return tuple(sum((Fraction(c, total) * lift[t] for c, lift in zip(weights, lifts)), Fraction(0))
                 for t in range(len(lifts[0])))


def goemans_verify(seq: ComparatorSeq, samples: int, seed: int) -> Iterator[str]:
    """Run every lift and ``samples`` random convex combinations; yields failure messages."""
    system = goemans_build(seq)
    words = combi.perms(seq.n) if seq.n <= 6 else []
    for w in words:
        lift = lift_sigma(seq, w)
        bad = system.violated(lift)
        if bad is not None:
            yield f"lift of {combi.perm_label(w)} violates {bad.name}"
        elif project(seq, lift) != tuple(Fraction(v) for v in w):
            yield f"lift of {combi.perm_label(w)} does not project to x_sigma"
        elif not mk_monotone(seq, lift):
            yield f"m_k increases along the lift of {combi.perm_label(w)}"
        elif not tilde_roundtrip(seq, lift, system):
            yield f"compressed round trip fails for {combi.perm_label(w)}"
    rng = random.Random(seed)
    for s in range(samples):
        point = random_convex_lift(seq, rng)
        bad = system.violated(point)
        if bad is not None:
            yield f"sample {s} violates {bad.name}"
        elif not edmonds_membership(project(seq, point)):
            yield f"sample {s} projects outside Perm({seq.n})"
        elif not tilde_roundtrip(seq, point, system):
            yield f"compressed round trip fails for sample {s}"


# Fooling sets ------------------------------------------------------------

@dataclass(frozen=True)
class FoolingSet:
    pairs: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.pairs)


def fooling_verify(M: RatMatrix, F: FoolingSet) -> bool:
    """Positive on every pair, and no two pairs with both cross entries positive."""
    idx = []
    for r, c in F.pairs:
        idx.append((M.row_index(r), M.col_index(c)))
    e = M.entries
    if any(e[r][c] <= 0 for r, c in idx):
        return False
    for a in range(len(idx)):
        ra, ca = idx[a]
        for b in range(a + 1, len(idx)):
            rb, cb = idx[b]
            if e[ra][cb] > 0 and e[rb][ca] > 0:
                return False
    return True


def quadratic_fooling_set(n: int) -> FoolingSet:
    """Pairs ([j] minus {i}, (l,+1)) and ([i-1] cup {j+1} or [i] when j = n, (l,-1))."""
    if not 2 <= n <= 12:
        raise ValueError(f"quadratic_fooling_set supports 2 <= n <= 12, got {n}")
    seq = quadratic(n)
    pairs = []
    for l, (i, j) in enumerate(seq.comps):
        if quadratic_position(n, i, j) != l:
            raise AssertionError(f"closed-form position of ({i},{j}) disagrees with the list")
        plus = frozenset(range(1, j + 1)) - {i}
        minus = frozenset(range(1, i)) | {j + 1} if j < n else frozenset(range(1, i + 1))
        pairs.append((combi.subset_label(plus), path_col_label(l, 1)))
        pairs.append((combi.subset_label(minus), path_col_label(l, -1)))
    return FoolingSet(tuple(pairs))
