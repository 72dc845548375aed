"""Command-line front end.

    erodist rank MODULE --at A,B
    erodist dist erosion M1 M2 [--projection] [--restricted] [--family linear|floor]
    erodist dist interleaving M1 M2
    erodist dist linf F1 F2
    erodist dist npd S1 S2
    erodist diagram MODULE
    erodist filtration COMPLEX --degree K --coeff z|f2|f3 -o OUT

Reports go to stdout as ``key<TAB>value`` lines. Exit status is 0 on success,
1 on usage errors and 2 when an input file fails validation.
"""

from __future__ import annotations

import argparse
import sys

from .category import F2, F3, ZZ, AbObj, SetObj, VectObj
from .erosion import erosion_distance_family, erosion_distance_projection, erosion_distance_restricted
from .filtration import (
    levelset_invariant_distance,
    module_from_size_pair,
    npd_bruteforce,
    value_grid,
)
from .io import FormatError, dumps, format_rational, module_to_json, parse_rational, read_module, read_size_pair
from .module import RankInvariant
from .onedim import ConstructibleModule, diagram_of, interleaving_distance_1d
from .poset import INF, SuperlinearFamily, derive_adjoint_projection

USAGE_ERROR = 1
VALIDATION_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(out, key, value):
    out.write(f"{key}\t{value}\n")


def _emit_distance(out, d):
    if d == INF:
        _emit(out, "distance", "inf")
        _emit(out, "decimal", "inf")
    else:
        _emit(out, "distance", format_rational(d))
        _emit(out, "decimal", f"{float(d):.6g}")


def _emit_object(out, obj):
    _emit(out, "object", str(obj))
    if isinstance(obj, VectObj):
        _emit(out, "dim", obj.dim)
    elif isinstance(obj, AbObj):
        _emit(out, "free", obj.free_rank)
        _emit(out, "torsion", ",".join(map(str, obj.invariant_factors)) or "-")
    elif isinstance(obj, SetObj):
        _emit(out, "size", len(obj.elements))


def _parse_at(s: str, dim: int):
    """'a,b' for one parameter; 'a1:a2,b1:b2' in several."""
    parts = s.split(",")
    if len(parts) != 2:
        raise UsageError(f"--at expects two points separated by ',', got {s!r}")
    pts = []
    for p in parts:
        coords = p.split(":")
        if len(coords) != dim:
            raise UsageError(f"point {p!r} needs {dim} coordinates")
        try:
            pts.append(tuple(parse_rational(c, "--at") for c in coords))
        except FormatError as e:
            raise UsageError(str(e)) from e
    return pts


def _one_dim_field(m, path):
    if m.dim != 1 or not m.coefficients.is_field:
        raise FormatError(path, "needs a one-parameter module over a field")
    return ConstructibleModule(m)


def cmd_rank(args, out):
    m = read_module(args.module)
    a, b = _parse_at(args.at, m.dim)
    inv = RankInvariant(m)
    try:
        obj = inv.evaluate(a, b)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit_object(out, obj)


def cmd_dist(args, out):
    kind = args.kind
    if kind == "erosion":
        m1, m2 = read_module(args.first), read_module(args.second)
        lattice = args.family == "floor"
        if lattice:
            for m, path in ((m1, args.first), (m2, args.second)):
                if not m.poset.is_integral():
                    raise FormatError(path, "the floor family needs integer grid coordinates")
        f, g = RankInvariant(m1, lattice=lattice), RankInvariant(m2, lattice=lattice)
        fam = SuperlinearFamily(args.family, m1.dim)
        if m1.dim != m2.dim or m1.coefficients != m2.coefficients:
            raise FormatError(args.second, "modules differ in dimension or coefficients")
        if args.projection:
            rep = erosion_distance_projection(f, g, derive_adjoint_projection(fam), restricted=args.restricted)
        elif args.restricted:
            rep = erosion_distance_restricted(f, g, fam)
        else:
            rep = erosion_distance_family(f, g, fam)
        _emit_distance(out, rep.distance)
        _emit(out, "attained", str(rep.attained).lower())
        _emit(out, "candidates", len(rep.candidates))
    elif kind == "interleaving":
        F = _one_dim_field(read_module(args.first), args.first)
        G = _one_dim_field(read_module(args.second), args.second)
        if F.p != G.p:
            raise FormatError(args.second, "modules over different fields")
        _emit_distance(out, interleaving_distance_1d(F, G))
    elif kind == "linf":
        s1, s2 = read_size_pair(args.first), read_size_pair(args.second)
        for s, path in ((s1, args.first), (s2, args.second)):
            if s.dim != 1:
                raise FormatError(path, "level-set distances need real-valued functions")
        f = {v: x[0] for v, x in s1.values.items()}
        g = {v: x[0] for v, x in s2.values.items()}
        if set(f) != set(g):
            raise FormatError(args.second, "functions are defined on different sets")
        _emit_distance(out, levelset_invariant_distance(f, g))
    elif kind == "npd":
        s1, s2 = read_size_pair(args.first), read_size_pair(args.second)
        _emit_distance(out, npd_bruteforce(s1, s2))


def cmd_diagram(args, out):
    F = _one_dim_field(read_module(args.module), args.module)
    for (b, d), mult in diagram_of(F):
        death = "inf" if d == INF else str(d)
        out.write(f"{b} {death} {mult}\n")


COEFFS = {"z": ZZ, "f2": F2, "f3": F3}


def cmd_filtration(args, out):
    S = read_size_pair(args.complex)
    m = module_from_size_pair(S, value_grid(S), args.degree, COEFFS[args.coeff])
    text = dumps(module_to_json(m))
    if args.output == "-":
        out.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
        _emit(out, "written", args.output)
        _emit(out, "grid", "x".join(map(str, m.poset.shape)))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="erodist", description="Exact erosion distances of persistence modules.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("rank", help="evaluate the rank invariant at (a, b)")
    r.add_argument("module")
    r.add_argument("--at", required=True, help="'a,b'; use ':' between coordinates in several parameters")
    r.set_defaults(func=cmd_rank)

    d = sub.add_parser("dist", help="distances between two inputs")
    d.add_argument("kind", choices=["erosion", "interleaving", "linf", "npd"])
    d.add_argument("first")
    d.add_argument("second")
    d.add_argument("--projection", action="store_true", help="use the adjoint projection of the family")
    d.add_argument("--restricted", action="store_true", help="check only points with a < b on every axis")
    d.add_argument("--family", choices=["linear", "floor"], default="linear")
    d.set_defaults(func=cmd_dist)

    g = sub.add_parser("diagram", help="type-B diagram of a one-parameter module")
    g.add_argument("module")
    g.set_defaults(func=cmd_diagram)

    f = sub.add_parser("filtration", help="sublevel homology module of a complex with vertex values")
    f.add_argument("complex")
    f.add_argument("--degree", type=int, required=True)
    f.add_argument("--coeff", choices=sorted(COEFFS), default="z")
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(func=cmd_filtration)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "degree", 0) is not None and getattr(args, "degree", 0) < 0:
            raise UsageError("--degree must be non-negative")
        args.func(args, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return USAGE_ERROR
    except ValueError as e:  # FormatError and module validation failures included
        err.write(f"invalid input: {e}\n")
        return VALIDATION_ERROR
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
