"""Markovian two-party protocols on layered branching programs.

A protocol with ``k`` rounds exchanges messages ``u_1 in V_1, ..., u_k in V_k``.
The first speaker draws ``u_1`` from ``init[input]``; message ``u_{j+1}`` is
drawn by the speaker of round ``j`` from ``kernels[j-1][(input, u_j)]``, and
speakers alternate.  The claimer finally outputs ``output[(input, u_k)]``
(absent keys mean 0).  Inputs on both sides are the string labels of the
target matrix rows (Alice) and columns (Bob).

Random claims are represented by their expectation, which is all that
correctness or the induced factorization ever depend on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .exactnum import RatMatrix, as_rational, format_rational, mat_mul_eq

Node = Hashable
Dist = Mapping[Node, Fraction]


class ProtocolError(ValueError):
    """The protocol tables are inconsistent (bad distribution, missing entry...)."""


def node_label(node: Node) -> str:
    if isinstance(node, tuple):
        return "(" + ",".join(node_label(x) for x in node) + ")"
    return str(node)


def path_label(path: Sequence[Node]) -> str:
    return "/".join(node_label(u) for u in path)


def _other(party: str) -> str:
    return "B" if party == "A" else "A"


@dataclass(frozen=True)
class MarkovianProtocol:
    layers: tuple[tuple[Node, ...], ...]
    x_domain: tuple[str, ...]
    y_domain: tuple[str, ...]
    init: Mapping[str, Dist]
    kernels: tuple[Mapping[tuple[str, Node], Dist], ...]
    output: Mapping[tuple[str, Node], Fraction]
    first_speaker: str = "A"
    claimer: str = "B"
    name: str = field(default="protocol", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        object.__setattr__(self, "x_domain", tuple(self.x_domain))
        object.__setattr__(self, "y_domain", tuple(self.y_domain))
        object.__setattr__(self, "kernels", tuple(self.kernels))
        self.validate()

    @property
    def rounds(self) -> int:
        return len(self.layers)

    def speaker(self, step: int) -> str:
        """Party choosing message ``u_{step+1}`` (step 0 is the initial message)."""
        return self.first_speaker if step % 2 == 0 else _other(self.first_speaker)

    def domain(self, party: str) -> tuple[str, ...]:
        return self.x_domain if party == "A" else self.y_domain

    def validate(self) -> None:
        if {self.first_speaker, self.claimer} - {"A", "B"}:
            raise ProtocolError("parties are 'A' and 'B'")
        k = self.rounds
        if k < 1 or any(len(layer) == 0 for layer in self.layers):
            raise ProtocolError("need at least one nonempty layer")
        if len(self.kernels) != k - 1:
            raise ProtocolError(f"{k} layers need {k - 1} transition kernels")
        layer_sets = [set(layer) for layer in self.layers]
        for layer, s in zip(self.layers, layer_sets):
            if len(s) != len(layer):
                raise ProtocolError("duplicate node within a layer")

        first_dom = self.domain(self.first_speaker)
        for z in first_dom:
            if z not in self.init:
                raise ProtocolError(f"missing initial distribution for input {z!r}")
            self._check_dist(self.init[z], layer_sets[0], f"init[{z!r}]")
        for j, kernel in enumerate(self.kernels, start=1):
            dom = self.domain(self.speaker(j))
            for z in dom:
                for u in self.layers[j - 1]:
                    if (z, u) not in kernel:
                        raise ProtocolError(
                            f"missing round-{j} distribution for input {z!r} at node "
                            f"{node_label(u)}")
                    self._check_dist(kernel[(z, u)], layer_sets[j],
                                     f"kernel {j} at ({z!r}, {node_label(u)})")
        claim_dom = set(self.domain(self.claimer))
        last = layer_sets[-1]
        for (z, u), w in self.output.items():
            if z not in claim_dom or u not in last:
                raise ProtocolError(f"output key ({z!r}, {node_label(u)}) is not valid")
            if as_rational(w) < 0:
                raise ProtocolError(f"negative output {w} at ({z!r}, {node_label(u)})")

    @staticmethod
    def _check_dist(dist: Dist, layer: set, where: str) -> None:
        total = Fraction(0)
        for v, p in dist.items():
            if v not in layer:
                raise ProtocolError(f"{where}: node {node_label(v)} not in next layer")
            p = as_rational(p)
            if p < 0:
                raise ProtocolError(f"{where}: negative probability {p}")
            total += p
        if total != 1:
            raise ProtocolError(f"{where}: probabilities sum to {format_rational(total)}")

    def input_of(self, party: str, x: str, y: str) -> str:
        return x if party == "A" else y

    def step_dist(self, step: int, z: str, prev: Node | None) -> Dist:
        if step == 0:
            return self.init[z]
        try:
            return self.kernels[step - 1][(z, prev)]
        except KeyError:
            raise ProtocolError(
                f"missing round-{step} distribution at ({z!r}, {node_label(prev)})"
            ) from None

    def claim(self, z: str, last: Node) -> Fraction:
        return as_rational(self.output.get((z, last), 0))

    def _check_inputs(self, x: str, y: str) -> None:
        if x not in self.x_domain:
            raise KeyError(f"{x!r} is not an Alice input")
        if y not in self.y_domain:
            raise KeyError(f"{y!r} is not a Bob input")


class Counterexample(NamedTuple):
    x: str
    y: str
    got: Fraction
    want: Fraction

    def __str__(self) -> str:
        return (f"counterexample at ({self.x}, {self.y}): expectation "
                f"{format_rational(self.got)}, target {format_rational(self.want)}")


@dataclass(frozen=True)
class Factorization:
    """Nonnegative A (x-domain by paths) and B (paths by y-domain)."""

    A: RatMatrix
    B: RatMatrix

    def __post_init__(self) -> None:
        if self.A.col_labels != self.B.row_labels:
            raise ValueError("A columns and B rows must carry the same path labels")
        if not (self.A.is_nonnegative() and self.B.is_nonnegative()):
            raise ValueError("factorization entries must be nonnegative")

    @property
    def gamma(self) -> tuple[str, ...]:
        return self.A.col_labels

    @property
    def size(self) -> int:
        return len(self.gamma)

    def product(self) -> RatMatrix:
        return self.A @ self.B

    def verify(self, target: RatMatrix):
        return mat_mul_eq(self.A, self.B, target)

    def to_json_obj(self) -> dict:
        return {"A": self.A.to_json_obj(), "B": self.B.to_json_obj()}


def forward_distribution(p: MarkovianProtocol, x: str, y: str) -> dict[Node, Fraction]:
    """Exact law of the last message ``u_k`` for inputs (x, y)."""
    p._check_inputs(x, y)
    dist: dict[Node, Fraction] = {}
    for u, w in p.step_dist(0, p.input_of(p.speaker(0), x, y), None).items():
        if w:
            dist[u] = as_rational(w)
    for step in range(1, p.rounds):
        z = p.input_of(p.speaker(step), x, y)
        nxt: dict[Node, Fraction] = {}
        for u, w in dist.items():
            for v, t in p.step_dist(step, z, u).items():
                if t:
                    nxt[v] = nxt.get(v, Fraction(0)) + w * as_rational(t)
        dist = nxt
    return dist


def exact_expectation(p: MarkovianProtocol, x: str, y: str) -> Fraction:
    """Average claim for inputs (x, y), summed exactly over all message paths."""
    z = p.input_of(p.claimer, x, y)
    return sum((w * p.claim(z, u) for u, w in forward_distribution(p, x, y).items()),
               Fraction(0))


def path_probabilities(p: MarkovianProtocol, x: str, y: str) -> Iterator[tuple[tuple, Fraction]]:
    """Every message path with positive probability, with that probability."""
    p._check_inputs(x, y)

    def walk(step: int, prefix: tuple, weight: Fraction):
        if step == p.rounds:
            yield prefix, weight
            return
        z = p.input_of(p.speaker(step), x, y)
        prev = prefix[-1] if prefix else None
        for v, t in p.step_dist(step, z, prev).items():
            if t:
                yield from walk(step + 1, prefix + (v,), weight * as_rational(t))

    yield from walk(0, (), Fraction(1))


def conditional_expectation(p: MarkovianProtocol, x: str, y: str,
                            prefix: Sequence[Node]) -> Fraction:
    """Average claim given that the first messages were ``prefix`` (by brute-force paths)."""
    prefix = tuple(prefix)
    num = den = Fraction(0)
    z = p.input_of(p.claimer, x, y)
    for path, w in path_probabilities(p, x, y):
        if path[:len(prefix)] == prefix:
            den += w
            num += w * p.claim(z, path[-1])
    if den == 0:
        raise ValueError(f"prefix {path_label(prefix)} has probability zero")
    return num / den


def check_correct(p: MarkovianProtocol, target: RatMatrix) -> Counterexample | None:
    """Compare every expectation with the target; None when the protocol is correct."""
    if tuple(target.row_labels) != p.x_domain or tuple(target.col_labels) != p.y_domain:
        raise ValueError("protocol input domains do not match the target labels")
    for (z, u), w in p.output.items():
        if as_rational(w) < 0:
            raise ProtocolError(f"negative claim at ({z!r}, {node_label(u)})")
    for i, x in enumerate(p.x_domain):
        row = target.entries[i]
        for j, y in enumerate(p.y_domain):
            got = exact_expectation(p, x, y)
            if got != row[j]:
                return Counterexample(x, y, got, row[j])
    return None


def _support_paths(p: MarkovianProtocol) -> Iterator[tuple]:
    """Paths whose every step has positive probability for some input of its speaker."""
    first = set()
    for z in p.domain(p.first_speaker):
        first.update(v for v, t in p.init[z].items() if t)
    succ: list[dict[Node, set]] = []
    for step, kernel in enumerate(p.kernels, start=1):
        nxt: dict[Node, set] = {}
        for (z, u), dist in kernel.items():
            nxt.setdefault(u, set()).update(v for v, t in dist.items() if t)
        succ.append(nxt)
    order = [{v: i for i, v in enumerate(layer)} for layer in p.layers]

    def walk(step: int, prefix: tuple):
        if step == p.rounds:
            yield prefix
            return
        options = first if step == 0 else succ[step - 1].get(prefix[-1], ())
        for v in sorted(options, key=order[step].__getitem__):
            yield from walk(step + 1, prefix + (v,))

    yield from walk(0, ())


def party_factor(p: MarkovianProtocol, party: str, z: str, path: Sequence[Node]) -> Fraction:
    """Product of ``party``'s own step probabilities along ``path`` (and its claim)."""
    acc = Fraction(1)
    for step in range(p.rounds):
        if p.speaker(step) != party:
            continue
        prev = path[step - 1] if step else None
        acc *= as_rational(p.step_dist(step, z, prev).get(path[step], 0))
        if not acc:
            return acc
    if p.claimer == party:
        acc *= p.claim(z, path[-1])
    return acc


def compile_factorization(p: MarkovianProtocol) -> Factorization:
    """Split each path's weight into Alice's and Bob's factors, keeping only Gamma.

    A path belongs to Gamma when some Alice input gives it a positive Alice
    factor and some Bob input gives it a positive Bob factor.
    """
    a_cols, b_rows, labels = [], [], []
    for path in _support_paths(p):
        a_col = [party_factor(p, "A", x, path) for x in p.x_domain]
        if not any(a_col):
            continue
        b_row = [party_factor(p, "B", y, path) for y in p.y_domain]
        if not any(b_row):
            continue
        a_cols.append(a_col)
        b_rows.append(b_row)
        labels.append(path_label(path))
    A = RatMatrix(p.x_domain, tuple(labels),
                  tuple(tuple(col[i] for col in a_cols) for i in range(len(p.x_domain))))
    B = RatMatrix(tuple(labels), p.y_domain, tuple(tuple(r) for r in b_rows))
    return Factorization(A, B)


def gamma_width(p: MarkovianProtocol) -> tuple[tuple[str, ...], int]:
    gamma = compile_factorization(p).gamma
    return gamma, len(gamma)


SINK = 0


def factorization_to_protocol(A: RatMatrix, B: RatMatrix,
                              name: str = "from-factorization") -> MarkovianProtocol:
    """One-round protocol whose expectations are exactly ``A @ B``.

    A is rescaled by ``lam`` so that its largest row sum is 1 (B by 1/lam).
    Alice sends inner index ``k`` (1-based) with probability ``lam * A[i,k]``
    or the sink node 0 with the leftover mass; Bob claims ``B[k,j] / lam``
    and 0 on the sink.
    """
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} @ {B.shape}")
    if not (A.is_nonnegative() and B.is_nonnegative()):
        raise ValueError("factorization_to_protocol needs nonnegative factors")
    r = A.shape[1]
    top = max((sum(row, Fraction(0)) for row in A.entries), default=Fraction(0))
    lam = 1 / top if top > 0 else Fraction(1)
    nodes = (SINK,) + tuple(range(1, r + 1))
    init = {}
    for x, row in zip(A.row_labels, A.entries):
        dist = {k + 1: lam * v for k, v in enumerate(row) if v}
        rest = 1 - sum(dist.values(), Fraction(0))
        if rest:
            dist[SINK] = rest
        init[x] = dist
    output = {}
    for k in range(r):
        for y, v in zip(B.col_labels, B.entries[k]):
            if v:
                output[(y, k + 1)] = v / lam
    return MarkovianProtocol((nodes,), A.row_labels, B.col_labels, init, (), output,
                             first_speaker="A", claimer="B", name=name)


@dataclass(frozen=True)
class SimulationResult:
    mean: Fraction
    count_nonneg: int
    variance: Fraction
    trials: int

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.trials) if self.trials else 0.0


def simulate(p: MarkovianProtocol, x: str, y: str, trials: int, seed: int) -> SimulationResult:
    """Monte Carlo run of the protocol with a PCG64 generator seeded by ``seed``.

    Trial ``t`` consumes row ``t`` of a ``trials x rounds`` block of uniforms,
    so any contiguous range of trials can be replayed independently by
    advancing the generator.  The mean and sample variance of the sampled
    claims are returned as exact rationals.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    p._check_inputs(x, y)
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random((trials, p.rounds))
    index = [{v: i for i, v in enumerate(layer)} for layer in p.layers]
    state = np.zeros(trials, dtype=np.int64)
    for step in range(p.rounds):
        z = p.input_of(p.speaker(step), x, y)
        nxt = np.empty(trials, dtype=np.int64)
        sources = [None] if step == 0 else [p.layers[step - 1][i] for i in np.unique(state)]
        for src in sources:
            dist = p.step_dist(step, z, src)
            targets = [v for v in p.layers[step] if dist.get(v, 0)]
            cdf = np.cumsum([float(dist[v]) for v in targets])
            cdf[-1] = 1.0
            mask = slice(None) if src is None else state == index[step - 1][src]
            picks = np.searchsorted(cdf, draws[mask, step], side="right")
            picks = np.minimum(picks, len(targets) - 1)
            nxt[mask] = np.array([index[step][v] for v in targets])[picks]
        state = nxt
    counts = np.bincount(state, minlength=len(p.layers[-1]))
    z = p.input_of(p.claimer, x, y)
    total = sq = Fraction(0)
    nonneg = 0
    for i, c in enumerate(counts.tolist()):
        if not c:
            continue
        w = p.claim(z, p.layers[-1][i])
        total += c * w
        sq += c * w * w
        if w >= 0:
            nonneg += c
    mean = total / trials
    var = (sq - trials * mean * mean) / (trials - 1) if trials > 1 else Fraction(0)
    return SimulationResult(mean, nonneg, var, trials)


def constant_protocol(x_domain: Sequence[str], y_domain: Sequence[str],
                      value, nodes: Sequence[Node] = ("u",)) -> MarkovianProtocol:
    """One-round protocol that always claims ``value`` (Alice spreads over ``nodes``)."""
    value = as_rational(value)
    share = Fraction(1, len(nodes))
    init = {x: {u: share for u in nodes} for x in x_domain}
    output = {(y, u): value for y in y_domain for u in nodes if value}
    return MarkovianProtocol((tuple(nodes),), tuple(x_domain), tuple(y_domain), init, (),
                             output, first_speaker="A", claimer="B", name="constant")

