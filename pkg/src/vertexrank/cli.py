"""Command-line front end.

Every command reads the line-oriented text formats of the library and
writes deterministic text to stdout.  Exit codes: 0 success, 2 parse
error, 3 precondition violation, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys

from .connection import build_matrix, format_matrix, saturating_rank
from .errors import InvariantError, ParseError, PreconditionError, VertexRankError
from .fragments import (contract_fragment, enumerate_fragments, glue, parse_fragment,
                        random_fragment)
from .invariants import (brauer_invariant_dim, invariant_dim_finite, parse_group,
                         spin_stabilizer)
from .linalg import rank
from .model import (VertexModel, format_model, format_polynomial, p_h, parse_model,
                    parse_polynomial, partition_function, partition_polynomial)
from .scalar import GaussRational, format_scalar
from .spin import (NO_LIMIT, apply_limit, degenerate_witness, format_oneparam,
                   normalize_spin_points, orbit_closed, parse_oneparam)
from .tensors import bilinear_form, contract

log = logging.getLogger("vertexrank")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_model(path):
    return parse_model(_read(path))


def _load_spin(path):
    h = parse_model(_read(path))
    if h.spin is None:
        raise PreconditionError(f"{path} is not a spin model file")
    return h


def _load_graph(path):
    g = parse_fragment(_read(path))
    if g.k != 0:
        raise PreconditionError(f"{path} is a {g.k}-fragment, expected a graph")
    return g


def _check_degree(h, g):
    if h.spin is None and g.max_degree() > h.degree_bound:
        raise PreconditionError(
            f"graph has a vertex of degree {g.max_degree()} but the model is only "
            f"specified up to degree {h.degree_bound}")


# commands ------------------------------------------------------------------

def cmd_eval(args, out):
    h = _load_model(args.model)
    if args.poly:
        poly = parse_polynomial(_read(args.poly), h.n)
        for alpha in poly.variables():
            if h.spin is None and sum(alpha) > h.degree_bound:
                raise PreconditionError(
                    f"variable y[{','.join(map(str, alpha))}] exceeds the model's degree bound")
        out.write(format_scalar(poly.evaluate(h)) + "\n")
        return
    if not args.graph:
        raise PreconditionError("eval needs --graph or --poly")
    g = _load_graph(args.graph)
    _check_degree(h, g)
    out.write(format_scalar(partition_function(h, g)) + "\n")


def _degree_for(h, args):
    if args.max_degree is not None:
        return args.max_degree
    if h.degree_bound is not None:
        return h.degree_bound
    return 2


def cmd_matrix(args, out):
    h = _load_model(args.model)
    fs = enumerate_fragments(args.k, args.vertices, _degree_for(h, args))
    m = build_matrix(h, fs)
    log.info("%d fragments, rank %d", len(fs), rank(m.entries))
    out.write(format_matrix(m))


def cmd_rank(args, out):
    if args.model is None and args.spin is None:
        raise PreconditionError("rank needs --model or --spin")
    h = _load_spin(args.spin) if args.spin else _load_model(args.model)
    degree = _degree_for(h, args)
    if h.spin is not None and h.degree_bound is None and args.max_degree is None:
        log.warning("spin model without degree bound: enumerating fragments of degree <= %d",
                    degree)
    report = saturating_rank(h, args.k, args.budget, target=args.target,
                             max_degree=degree, patience=args.patience)
    out.write(report.line() + "\n")
    if args.classes:
        for v, count, r in report.classes:
            out.write(f"class vertices={v} fragments={count} rank={r}\n")


def cmd_invdim(args, out):
    if (args.group is None) == (args.spin is None):
        raise PreconditionError("invdim needs exactly one of --group and --spin")
    if args.group:
        group = parse_group(_read(args.group))
    else:
        h = _load_spin(args.spin)
        group = spin_stabilizer(h.spin.points, h.spin.weights)
    out.write(f"{invariant_dim_finite(group, args.k)}\n")


def cmd_brauer(args, out):
    if args.n < 1 or args.k < 0:
        raise PreconditionError("need n >= 1 and k >= 0")
    out.write(f"{brauer_invariant_dim(args.n, args.k)}\n")


def cmd_spin(args, out):
    h = _load_spin(args.spin)
    pts, ws = h.spin.points, h.spin.weights
    closed = orbit_closed(pts)
    out.write(f"closed={str(closed).lower()}\n")
    if not closed:
        out.write("witness:\n")
        out.write(format_oneparam(degenerate_witness(pts)))
        npts, nws, steps = normalize_spin_points(pts, ws, args.e)
        out.write(f"normalized steps={len(steps)}:\n")
        if npts:
            out.write(format_model(VertexModel.from_spin(npts, nws)))
        else:
            out.write(format_model(VertexModel.empty_spin(h.n)))
        pts, ws = npts, nws
    span = rank(list(pts)) if pts else 0
    if span < h.n:
        out.write(f"stabilizer=positive_dimensional span_rank={span}\n")
        return
    group = spin_stabilizer(pts, ws)
    out.write(f"stabilizer_order={group.order()}\n")
    for k in range(args.kmax + 1):
        out.write(f"k={k} dim={invariant_dim_finite(group, k)}\n")


def cmd_limit(args, out):
    h = _load_model(args.model)
    lam = parse_oneparam(_read(args.oneparam))
    if lam.n != h.n:
        raise PreconditionError(f"subgroup acts on n={lam.n}, model has n={h.n}")
    result = apply_limit(lam, h.truncate(args.e), args.e)
    out.write("NO_LIMIT\n" if result is NO_LIMIT else format_model(result))


def cmd_pi(args, out):
    g = _load_graph(args.graph)
    if args.n < 1:
        raise PreconditionError("n must be positive")
    out.write(format_polynomial(partition_polynomial(g, args.n)) + "\n")


def _random_model(rng, n, e):
    support = {}
    for _ in range(rng.randint(1, 6)):
        alpha = [0] * n
        for _ in range(rng.randint(0, e)):
            alpha[rng.randrange(n)] += 1
        support[tuple(alpha)] = GaussRational(rng.randint(-3, 3), rng.randint(-2, 2))
    return VertexModel(n, {a: v for a, v in support.items() if v}, e)


def cmd_selftest(args, out):
    """Randomized identity checks driven by ``--seed``."""
    rng = random.Random(args.seed)
    checks = 0
    for _ in range(args.count):
        n = rng.randint(1, 3)
        h = _random_model(rng, n, 3)
        k = rng.randint(2, 4)
        f = random_fragment(rng, k, 3, 3)
        i, j = sorted(rng.sample(range(1, k + 1), 2))
        if p_h(h, contract_fragment(f, i, j)) != contract(p_h(h, f), i, j):
            raise InvariantError(f"contraction identity failed for seed {args.seed}")
        g = random_fragment(rng, k, 3, 3)
        if partition_function(h, glue(f, g)) != bilinear_form(p_h(h, f), p_h(h, g)):
            raise InvariantError(f"gluing identity failed for seed {args.seed}")
        graph = glue(f, g)
        if partition_polynomial(graph, n).evaluate(h) != partition_function(h, graph):
            raise InvariantError(f"partition polynomial mismatch for seed {args.seed}")
        checks += 3
    out.write(f"selftest ok seed={args.seed} checks={checks}\n")


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vertexrank",
                                description="Exact vertex-model partition functions and connection ranks.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="partition function of a graph")
    s.add_argument("--model", required=True)
    s.add_argument("--graph")
    s.add_argument("--poly", help="evaluate a partition polynomial file instead")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("matrix", help="connection matrix of all small k-fragments")
    s.add_argument("--model", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--vertices", type=int, default=1)
    s.add_argument("--max-degree", type=int)
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("rank", help="saturating rank of the connection matrix")
    s.add_argument("--model")
    s.add_argument("--spin")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--budget", type=int, default=2, help="largest vertex count enumerated")
    s.add_argument("--target", type=int, help="known upper bound on the rank")
    s.add_argument("--max-degree", type=int)
    s.add_argument("--patience", type=int, default=2)
    s.add_argument("--classes", action="store_true", help="print per-size-class counts")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("invdim", help="invariant dimension for a finite group")
    s.add_argument("--group")
    s.add_argument("--spin")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_invdim)

    s = sub.add_parser("brauer", help="dimension of O_n-invariants in V^k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_brauer)

    s = sub.add_parser("spin", help="orbit analysis of a spin model")
    s.add_argument("--spin", required=True)
    s.add_argument("--kmax", type=int, default=4)
    s.add_argument("--e", type=int, help="truncation degree for the limit check")
    s.set_defaults(func=cmd_spin)

    s = sub.add_parser("limit", help="limit of a truncated model along a one-parameter subgroup")
    s.add_argument("--model", required=True)
    s.add_argument("--oneparam", required=True)
    s.add_argument("--e", type=int, required=True)
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("pi", help="partition polynomial of a graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_pi)

    s = sub.add_parser("selftest", help="randomized identity checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    out = out or sys.stdout
    try:
        args.func(args, out)
    except VertexRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
