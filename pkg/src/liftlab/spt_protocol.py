"""Two-round protocol guessing spanning-tree slacks |U| - 1 - |T cap E(U)|.

Alice (holding U) sends a uniform vertex of U.  Bob (holding T) orients T
toward that vertex and returns a uniform oriented tree edge (x, y).  Alice
claims n - 1 when x is in U and y is not, else 0.
"""
from __future__ import annotations

from fractions import Fraction

from . import combi
from .combi import Graph
from .protocol import MarkovianProtocol
from .slack import spt_rows


def build_spt_protocol(g: Graph, start: dict[str, dict[int, Fraction]] | None = None
                       ) -> MarkovianProtocol:
    """Protocol for the slack matrix of :func:`liftlab.slack.slack_spt`.

    ``start`` overrides Alice's first-message law per input label; any law
    supported inside U keeps the protocol correct.
    """
    if g.n < 3:
        raise ValueError("spanning-tree protocol needs n >= 3")
    if not g.is_connected():
        raise ValueError("spanning-tree protocol needs a connected graph")
    n = g.n
    rows = spt_rows(g)
    trees = combi.spanning_trees(g)
    x_dom = tuple(combi.subset_label(U) for U in rows)
    y_dom = tuple(combi.tree_label(t) for t in trees)
    arcs = tuple(a for e in g.edges for a in (e, (e[1], e[0])))

    init = {}
    for U, lab in zip(rows, x_dom):
        init[lab] = {u: Fraction(1, len(U)) for u in sorted(U)}
    if start:
        init.update(start)

    share = Fraction(1, n - 1)
    kernel = {}
    for t, lab in zip(trees, y_dom):
        for root in g.vertices:
            kernel[(lab, root)] = {arc: share for arc in combi.orient_toward(n, t, root)}

    output = {}
    for U, lab in zip(rows, x_dom):
        for x, y in arcs:
            if x in U and y not in U:
                output[(lab, (x, y))] = Fraction(n - 1)

    return MarkovianProtocol(
        layers=(tuple(g.vertices), arcs),
        x_domain=x_dom,
        y_domain=y_dom,
        init=init,
        kernels=(kernel,),
        output=output,
        first_speaker="A",
        claimer="A",
        name=f"spt(K{n})" if len(g.edges) == n * (n - 1) // 2 else "spt",
    )


def complete_graph_width(n: int) -> int:
    """Width n(n-1)(n-2) of the protocol on K_n."""
    return n * (n - 1) * (n - 2)
