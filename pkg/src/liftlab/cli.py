"""Command line entry point: ``liftlab <command> ...``.

Exit codes: 0 on success, 1 when a verification fails (the first
counterexample is printed), 2 on usage errors and size guards.  Every
randomized command takes ``--seed`` (default 0), so output is a pure
function of the arguments.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import combi, cover, permext, sortnet
from .exactnum import RatMatrix, format_rational
from .match_protocol import match_factorization, match_width_report
from .protocol import check_correct, compile_factorization, exact_expectation, simulate
from .slack import slack_match, slack_perm, slack_spt
from .spt_protocol import build_spt_protocol, complete_graph_width

DEFAULT_SEED = 0


class UsageError(Exception):
    """Bad arguments that argparse cannot catch (size guards, missing files)."""


class VerificationFailure(Exception):
    """A checked identity does not hold."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph(args) -> combi.Graph:
    if getattr(args, "graph", None):
        return combi.parse_graph(_read(args.graph))
    if args.n is None:
        raise UsageError("give --n or --graph")
    return combi.complete_graph(args.n)


def _network(args) -> sortnet.ComparatorSeq:
    if getattr(args, "network", None) or getattr(args, "file", None):
        return sortnet.parse_network(_read(args.network or args.file))
    if args.n is None:
        raise UsageError("give --n with --gen, or a network file")
    return sortnet.generate(args.gen, args.n)


def _matrix_text(m: RatMatrix) -> str:
    lines = ["\t" + "\t".join(m.col_labels)]
    for label, row in zip(m.row_labels, m.entries):
        lines.append(label + "\t" + "\t".join(format_rational(v) for v in row))
    return "\n".join(lines) + "\n"


def _check(mismatch) -> None:
    if mismatch is not None:
        raise VerificationFailure(str(mismatch))


def cmd_slack(args) -> None:
    if args.polytope == "perm":
        s = slack_perm(args.n)
    elif args.polytope == "spt":
        s = slack_spt(_graph(args))
    else:
        s = slack_match(_graph(args))
    if args.format == "json":
        _emit(s.matrix.to_json() + "\n", args.out)
    else:
        rows, cols = s.shape
        _emit(f"# {s.polytope}: {rows} rows x {cols} columns\n" + _matrix_text(s.matrix), args.out)


def _factorize(args):
    if args.polytope == "perm":
        seq = _network(args)
        f = permext.perm_factorization(seq).factorization
        return f, slack_perm(seq.n).matrix
    g = _graph(args)
    if args.polytope == "spt":
        f = compile_factorization(build_spt_protocol(g))
        return f, slack_spt(g).matrix
    tks = None
    if args.tk:
        tks = {}
        for path in args.tk:
            n, k, fam = cover.tk_from_json(_read(path))
            if n != g.n:
                raise UsageError(f"{path} is for n={n}, graph has n={g.n}")
            tks[k] = fam
    return match_factorization(g, tks), slack_match(g).matrix


def cmd_factorize(args) -> None:
    f, target = _factorize(args)
    if args.out:
        _emit(json.dumps(f.to_json_obj()) + "\n", args.out)
    print(f"polytope={args.polytope} rows={target.shape[0]} cols={target.shape[1]} size={f.size}")
    if args.verify:
        _check(f.verify(target))
        print("verified: A @ B equals the slack matrix exactly")


def _protocol(args):
    if args.protocol == "spt":
        g = _graph(args)
        return build_spt_protocol(g), slack_spt(g).matrix
    seq = _network(args)
    p = (permext.one_round_protocol(seq) if args.protocol == "perm"
         else permext.two_round_protocol(seq))
    return p, slack_perm(seq.n).matrix


def cmd_verify(args) -> None:
    p, target = _protocol(args)
    ce = check_correct(p, target)
    width = compile_factorization(p).size
    print(f"protocol={p.name} inputs={len(p.x_domain)}x{len(p.y_domain)} width={width}")
    if ce is not None:
        raise VerificationFailure(str(ce))
    if args.protocol == "spt" and args.graph is None:
        want = complete_graph_width(args.n)
        if width != want:
            raise VerificationFailure(f"width {width} differs from n(n-1)(n-2) = {want}")
    print("correct: every expectation equals the slack entry")


def cmd_simulate(args) -> None:
    p, target = _protocol(args)
    x = args.x if args.x is not None else p.x_domain[0]
    y = args.y if args.y is not None else p.y_domain[0]
    try:
        exact = exact_expectation(p, x, y)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    res = simulate(p, x, y, args.trials, args.seed)
    print(f"protocol={p.name} x={x} y={y} trials={res.trials} seed={args.seed}")
    print(f"exact={format_rational(exact)} slack={format_rational(target.entry(x, y))}")
    print(f"mean={float(res.mean):.6f} variance={float(res.variance):.6f} "
          f"stderr={res.stderr:.6f} nonnegative={res.count_nonneg}/{res.trials}")


def cmd_sortnet(args) -> None:
    if args.action == "generate":
        _emit(sortnet.format_network(sortnet.generate(args.kind, args.n)), args.out)
        return
    seq = _network(args)
    if args.action == "check":
        fwd = sortnet.is_sorting_network(seq, sortnet.FORWARD)
        rev = sortnet.is_sorting_network(seq, sortnet.REVERSE)
        print(f"n={seq.n} q={seq.q} forward={'sorts' if fwd else 'fails'} "
              f"reverse={'sorts' if rev else 'fails'}")
        if not fwd:
            J = _unsorted_set(seq)
            raise VerificationFailure(
                f"0/1 input {combi.subset_label(J)} is sent to "
                f"{combi.subset_label(sortnet.apply_to_set(seq, J, sortnet.FORWARD))}")
        return
    res = sortnet.minimality(seq, args.mode)
    print(f"n={seq.n} q={seq.q} mode={args.mode}: {res}")
    if not res.minimal:
        raise VerificationFailure("the network is not minimal")


def _unsorted_set(seq: sortnet.ComparatorSeq) -> frozenset[int]:
    for J in combi.subsets(seq.n, "proper"):
        out = sortnet.apply_to_set(seq, J, sortnet.FORWARD)
        if out != frozenset(range(seq.n - len(J) + 1, seq.n + 1)):
            return J
    raise AssertionError("no unsorted 0/1 input found")


def cmd_cover(args) -> None:
    fam = cover.build_Tk(args.n, args.k)
    text = cover.tk_to_json(args.n, args.k, fam) + "\n"
    if args.out:
        _emit(text, args.out)
    bound = cover.tk_bound(args.n, args.k)
    print(f"n={args.n} k={args.k} |T_k|={len(fam)} bound={float(bound):.3f}")
    if not args.out:
        sys.stdout.write(text)


def cmd_goemans(args) -> None:
    seq = _network(args)
    failures = list(permext.goemans_verify(seq, args.samples, args.seed))
    system = permext.goemans_build(seq)
    print(f"n={seq.n} q={seq.q} dim={system.dim} equalities={len(system.equalities)} "
          f"inequalities={len(system.inequalities)} samples={args.samples} seed={args.seed}")
    if failures:
        raise VerificationFailure(failures[0])
    print("all lifts feasible, projections in Perm(n), compressed round trips exact")


def cmd_fooling(args) -> None:
    n = args.n
    if not 2 <= n <= 8:
        raise UsageError("fooling supports 2 <= n <= 8")
    seq = sortnet.quadratic(n)
    A = permext.perm_a_matrix(seq)
    F = permext.quadratic_fooling_set(n)
    ok = permext.fooling_verify(A, F)
    print(f"n={n} pairs={len(F)} columns={A.shape[1]} fooling={'yes' if ok else 'no'}")
    if not ok:
        raise VerificationFailure("the fooling set fails on the left factor")
    print(f"rk+(A) = {len(F)}")


def report_rows(n_max: int = 5) -> list[dict]:
    rows = []
    for n in range(3, n_max + 1):
        seq = sortnet.quadratic(n)
        f = permext.perm_factorization(seq).factorization
        ok = f.verify(slack_perm(n).matrix) is None
        rows.append({"polytope": "perm", "n": n, "facets": 2**n - 2, "size": f.size,
                     "width": f.size, "bound": str(2 * seq.q), "pass": ok and f.size <= 2 * seq.q})
    for n in range(3, n_max + 1):
        g = combi.complete_graph(n)
        p = build_spt_protocol(g)
        target = slack_spt(g).matrix
        f = compile_factorization(p)
        ok = check_correct(p, target) is None and f.verify(target) is None
        bound = complete_graph_width(n)
        rows.append({"polytope": "spt", "n": n, "facets": target.shape[0], "size": f.size,
                     "width": f.size, "bound": str(bound), "pass": ok and f.size <= bound})
    for n in range(4, n_max + 2):
        g = combi.complete_graph(n)
        f = match_factorization(g)
        target = slack_match(g).matrix
        rep = match_width_report(g, factorization=f)
        rows.append({"polytope": "match", "n": n, "facets": target.shape[0], "size": f.size,
                     "width": rep.width, "bound": f"{float(rep.bound):.1f}",
                     "pass": f.verify(target) is None and rep.within})
    return rows


def cmd_report(args) -> None:
    if not 3 <= args.n_max <= 6:
        raise UsageError("report supports --n-max between 3 and 6")
    rows = report_rows(args.n_max)
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        head = f"{'polytope':<9}{'n':>3}{'|P|':>7}{'size':>7}{'width':>7}{'bound':>11}  result\n"
        body = "".join(
            f"{r['polytope']:<9}{r['n']:>3}{r['facets']:>7}{r['size']:>7}{r['width']:>7}"
            f"{r['bound']:>11}  {'pass' if r['pass'] else 'FAIL'}\n" for r in rows)
        _emit(head + body, args.out)
    if not all(r["pass"] for r in rows):
        raise VerificationFailure("at least one report row failed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liftlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def net_opts(p):
        p.add_argument("--n", type=int)
        p.add_argument("--network", help="network file: 'n q' then q lines 'i j'")
        p.add_argument("--gen", choices=sorted(sortnet.GENERATORS), default="quadratic")

    p = sub.add_parser("slack", help="print a slack matrix")
    p.add_argument("--polytope", choices=("perm", "spt", "match"), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--graph", help="graph file: 'n m' then m lines 'u v'")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_slack)

    p = sub.add_parser("factorize", help="build (and verify) a nonnegative factorization")
    p.add_argument("--polytope", choices=("perm", "spt", "match"), required=True)
    net_opts(p)
    p.add_argument("--graph")
    p.add_argument("--tk", action="append", help="T_k JSON file (repeatable)")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out", help="write the factors as JSON")
    p.set_defaults(func=cmd_factorize)

    for name, helptext in (("verify", "check a protocol against its slack matrix"),
                           ("simulate", "Monte Carlo run of a protocol on one cell")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--protocol", choices=("spt", "perm", "perm2"), required=True)
        net_opts(p)
        p.add_argument("--graph")
        if name == "simulate":
            p.add_argument("--x", help="Alice input label (default: first row)")
            p.add_argument("--y", help="Bob input label (default: first column)")
            p.add_argument("--trials", type=int, default=100000)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.set_defaults(func=cmd_simulate)
        else:
            p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sortnet", help="sorting-network tools")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("check")
    net_opts(q)
    q.add_argument("--file")
    q.set_defaults(func=cmd_sortnet)
    q = ssub.add_parser("generate")
    q.add_argument("--kind", choices=sorted(sortnet.GENERATORS), required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_sortnet)
    q = ssub.add_parser("minimality")
    net_opts(q)
    q.add_argument("--file")
    q.add_argument("--mode", choices=("one_removal", "exhaustive"), default="one_removal")
    q.set_defaults(func=cmd_sortnet)

    p = sub.add_parser("cover", help="greedy covers")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("tk")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_cover)

    p = sub.add_parser("goemans", help="lifted permutahedron checks")
    gsub = p.add_subparsers(dest="action", required=True)
    q = gsub.add_parser("verify")
    net_opts(q)
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--seed", type=int, default=DEFAULT_SEED)
    q.set_defaults(func=cmd_goemans)

    p = sub.add_parser("fooling", help="fooling-set certificate for the quadratic network")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_fooling)

    p = sub.add_parser("report", help="summary table of every construction")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except VerificationFailure as exc:
        print(f"FAIL: {exc}")
        return 1
    except (UsageError, ValueError) as exc:
        print(f"liftlab: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
