"""Command line front end.

Exit codes: 0 success (for ``verify``: Covered), 2 Uncovered, 3 Unknown,
64 unreadable input or bad usage, 65 input of the wrong dimension,
70 a composed cover that fails re-verification.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io, render
from .compose import (
    HullDecomposition,
    compose_cover,
    point_cover,
    simplex_segment_decomposition,
    theorem32_bound,
)
from .covering import VerdictKind, gamma_upper, verify_cover
from .errors import GeometryError
from .geometry import convex_hull
from .illumination import illumination_number_upper

EXIT_OK = 0
EXIT_UNCOVERED = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64
EXIT_DIM = 65
EXIT_INTERNAL = 70

VERDICT_EXIT = {
    VerdictKind.COVERED: EXIT_OK,
    VerdictKind.UNCOVERED: EXIT_UNCOVERED,
    VerdictKind.UNKNOWN: EXIT_UNKNOWN,
}


class _Exit(Exception):
    def __init__(self, code, msg=""):
        super().__init__(msg)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vec(x):
    return " ".join(io.fmt(v) for v in np.ravel(x))


class _Out:
    def __init__(self, quiet):
        self.quiet = quiet

    def __call__(self, *a):
        if not self.quiet:
            print(*a)


def _read_body(path):
    try:
        bf = io.read_body(path)
        return bf, bf.body()
    except io.ParseError as exc:
        raise _Exit(EXIT_USAGE, f"{path}: {exc}")
    except GeometryError as exc:
        raise _Exit(EXIT_USAGE, f"{path}: {exc}")


def _read_cover(path, dim):
    try:
        return io.read_cover(path, dim).cover()
    except (io.ParseError, ValueError) as exc:
        raise _Exit(EXIT_USAGE, f"{path}: {exc}")


def cmd_verify(args, out):
    _, K = _read_body(args.body)
    cover = _read_cover(args.cover, K.ambient_dim)
    v = verify_cover(K, cover, eps=args.eps, tol=args.tol)
    out(f"verdict: {v.kind.value}")
    if v.kind is VerdictKind.UNCOVERED:
        out(f"witness: {_vec(v.witness)}")
    if v.kind is VerdictKind.UNKNOWN:
        out(f"resolution: {v.resolution:.3g}")
    out(f"cells processed: {v.cells_processed}")
    return VERDICT_EXIT[v.kind]


def cmd_compose(args, out):
    parts = []
    for body_path, cover_path in args.part:
        _, B = _read_body(body_path)
        parts.append((B, _read_cover(cover_path, None)))
    try:
        decomp = HullDecomposition(tuple(parts))
    except GeometryError as exc:
        raise _Exit(EXIT_DIM, str(exc))
    K = decomp.hull()
    name = args.body_name
    cover = compose_cover(decomp, body_ref=name)
    gammas = [c.gamma for _, c in decomp.parts]
    q = decomp.q
    out(f"p = {decomp.p}, n = {decomp.ambient_dim}, q = min(p, n + 1) = {q}")
    for i, (B, c) in enumerate(decomp.parts, 1):
        out(f"part {i}: gamma_{i} = {io.fmt(c.gamma)}, {c.m} centers, affine dim {B.affine_dim}")
    terms = ", ".join(f"({q - 1} + {io.fmt(g)})/{q}" for g in gammas)
    out(f"gamma = max({terms}) = {io.fmt(cover.gamma)}")
    out(f"centers: {cover.m}")
    v = verify_cover(K, cover, eps=args.eps, tol=args.tol)
    if not v.covered:
        out(f"re-verification failed: {v.kind.value}")
        return EXIT_INTERNAL
    out(f"re-verified: Covered ({v.cells_processed} cells)")
    if args.body_out:
        io.write_body(args.body_out, name, K.vertices)
    io.write_cover(args.out, cover)
    return EXIT_OK


def _composed_start(K, m):
    """A composed cover of K to start from, or None if none fits in m."""
    if K.affine_dim >= 1 and len(K.vertices) == K.affine_dim + 1:
        c = compose_cover(simplex_segment_decomposition(K))
        return c if c.m <= m else None
    if len(K.vertices) <= m:
        parts = [(convex_hull(v[None, :], K.ambient_dim), point_cover(v)) for v in K.vertices]
        return compose_cover(HullDecomposition(tuple(parts)))
    return None


def cmd_optimize(args, out):
    bf, K = _read_body(args.body)
    if args.m < 1:
        raise _Exit(EXIT_USAGE, "--m must be at least 1")
    warm = None
    if args.warm_start == "composed":
        warm = _composed_start(K, args.m)
        if warm is None:
            out("no composed cover fits; starting cold")
        else:
            out(f"warm start: composed cover, gamma = {io.fmt(warm.gamma)}")
    kw = {} if args.tol is None else {"tol": args.tol}
    g, cover = gamma_upper(K, args.m, budget=args.budget, seed=args.seed, warm_start=warm, eps=args.eps, **kw)
    out(f"gamma: {io.fmt(g)}")
    out(f"centers: {cover.m}")
    if args.out:
        io.write_cover(args.out, cover, bf.name)
    return EXIT_OK


def cmd_illuminate(args, out):
    _, K = _read_body(args.body)
    if not K.full_dimensional:
        raise _Exit(EXIT_DIM, "illumination needs a full-dimensional body")
    ds = illumination_number_upper(K, exact_threshold=args.exact_threshold)
    out(f"directions: {len(ds)}")
    out(f"exact branch: {'yes' if ds.exact else 'no'} (pool of {ds.pool_size})")
    for j, d in enumerate(ds.directions):
        out(f"direction {j}: {_vec(d)}")
    for i, v in enumerate(K.vertices):
        out(f"vertex {i} ({_vec(v)}) -> direction {ds.coverage[i]}")
    return EXIT_OK


def cmd_bounds(args, out):
    _, L = _read_body(args.L)
    _, M = _read_body(args.M)
    try:
        rep = theorem32_bound(L, M)
    except GeometryError as exc:
        raise _Exit(EXIT_DIM, str(exc))
    out(f"{rep.case_label}: affine dims {rep.dims[0]}, {rep.dims[1]}")
    for e in rep.entries:
        out(f"  m = {e.m}  gamma <= {e.gamma_bound:.4f}  ({io.fmt(e.gamma_bound)}; {e.note})")
    return EXIT_OK


def cmd_render(args, out):
    _, K = _read_body(args.body)
    cover = _read_cover(args.cover, K.ambient_dim)
    want = {"svg": 2, "obj": 3}[args.format]
    if K.ambient_dim != want:
        raise _Exit(EXIT_DIM, f"{args.format} output needs dimension {want}, body has {K.ambient_dim}")
    text = render.svg(K, cover) if args.format == "svg" else render.obj(K, cover)
    io.write_text(args.out, text)
    out(f"wrote {args.out}")
    return EXIT_OK


def cmd_report(args, out):
    from . import acceptance

    ok = True
    for r in acceptance.run(quick=args.quick, seed=args.seed):
        ok &= r.passed
        print(r.line())
    return EXIT_OK if ok else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--eps", type=float, help="verifier cell resolution")
    common.add_argument("--seed", type=int, help="seed for every random choice (default 0)")
    common.add_argument("--tol", type=float, help="numeric tolerance")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print nothing but errors")

    p = _Parser(prog="homocover", description="Homothetic covers of convex polytopes.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", parents=[common], help="check that a cover covers a body")
    s.add_argument("body")
    s.add_argument("cover")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("compose", parents=[common], help="cover a convex hull from covers of its parts")
    s.add_argument("--part", nargs=2, action="append", required=True, metavar=("BODY", "COVER"))
    s.add_argument("--out", required=True)
    s.add_argument("--body-out")
    s.add_argument("--body-name", default="hull")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("optimize", parents=[common], help="search for a cover with small ratio")
    s.add_argument("body")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--budget", type=int, default=256)
    s.add_argument("--out")
    s.add_argument("--warm-start", choices=("none", "composed"), default="none")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("illuminate", parents=[common], help="small illuminating direction set")
    s.add_argument("body")
    s.add_argument("--exact-threshold", type=int, default=24)
    s.set_defaults(func=cmd_illuminate)

    s = sub.add_parser("bounds", parents=[common], help="bounds for the hull of two flat bodies in space")
    s.add_argument("L")
    s.add_argument("M")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("render", parents=[common], help="draw a body and its cover")
    s.add_argument("body")
    s.add_argument("cover")
    s.add_argument("--format", choices=("svg", "obj"), required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("report", parents=[common], help="run the acceptance table")
    s.add_argument("--quick", action="store_true", help="smaller sample counts")
    s.set_defaults(func=cmd_report)
    return p


GLOBAL_DEFAULTS = {"eps": None, "seed": 0, "tol": None, "quiet": False}


def main(argv=None):
    args = build_parser().parse_args(argv)
    # global flags may appear before or after the subcommand
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    out = _Out(args.quiet)
    try:
        return args.func(args, out)
    except _Exit as exc:
        if str(exc):
            print(f"homocover: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
