"""JSON file formats for modules and size pairs.

Every file carries ``"format": "erodist/1"``. Rationals are written as
``"p/q"`` strings. Module objects are keyed by grid index (``"i,j"``), edges
by ``"i,j->k,l"`` with the target one step up a single axis, and matrices are
lists of rows. Serialization is canonical (sorted keys), so writing a module
read from its own output reproduces the same bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import IntMatrix
from .category import AbObj, Coefficients, Presentation, presentation_of
from .filtration import SimplicialComplex, SizePair
from .module import PersistenceModule
from .poset import GridPoset

FORMAT = "erodist/1"


class FormatError(ValueError):
    """A malformed input file; ``location`` names the offending field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s, where: str) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise FormatError(where, f"expected a rational as 'p/q' string or integer, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(where, f"bad rational {s!r}") from e


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(where, "expected an object")
    if key not in obj:
        raise FormatError(where, f"missing {key!r}")
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(where, f"expected an integer, got {x!r}")
    return x


def _matrix(rows, n_rows: int, n_cols: int, where: str) -> IntMatrix:
    if not isinstance(rows, list) or len(rows) != n_rows:
        raise FormatError(where, f"expected {n_rows} rows")
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != n_cols:
            raise FormatError(f"{where}[{i}]", f"expected {n_cols} entries")
        for j, x in enumerate(r):
            _int(x, f"{where}[{i}][{j}]")
    return IntMatrix.from_rows(rows, n_cols) if n_rows else IntMatrix.zeros(0, n_cols)


def _check_format(doc, where: str = "$"):
    if not isinstance(doc, dict):
        raise FormatError(where, "top level must be an object")
    if doc.get("format") != FORMAT:
        raise FormatError(f"{where}.format", f"expected {FORMAT!r}, got {doc.get('format')!r}")


def _coefficients(doc) -> Coefficients:
    c = _need(doc, "coefficients", "$")
    kind = _need(c, "kind", "$.coefficients")
    try:
        if kind == "field":
            return Coefficients.field(_int(_need(c, "p", "$.coefficients"), "$.coefficients.p"))
        if kind == "int":
            return Coefficients.integers()
    except ValueError as e:
        raise FormatError("$.coefficients", str(e)) from e
    raise FormatError("$.coefficients.kind", f"unknown kind {kind!r}")


def _index_key(idx) -> str:
    return ",".join(str(i) for i in idx)


def _parse_index(s: str, dim: int, where: str) -> tuple[int, ...]:
    try:
        idx = tuple(int(x) for x in s.split(","))
    except ValueError as e:
        raise FormatError(where, f"bad grid index {s!r}") from e
    if len(idx) != dim:
        raise FormatError(where, f"grid index {s!r} has {len(idx)} coordinates, expected {dim}")
    return idx


def _object(spec, coeff: Coefficients, where: str) -> Presentation:
    if not isinstance(spec, dict):
        raise FormatError(where, "object spec must be an object")
    if "gens" in spec:
        gens = _int(spec["gens"], f"{where}.gens")
        rels = spec.get("relations", [[] for _ in range(gens)])
        width = len(rels[0]) if rels else 0
        return Presentation(gens, _matrix(rels, gens, width, f"{where}.relations"), coeff)
    if coeff.is_field:
        return Presentation.free(_int(_need(spec, "dim", where), f"{where}.dim"), coeff)
    free = _int(spec.get("free", 0), f"{where}.free")
    tors = spec.get("torsion", [])
    if not isinstance(tors, list):
        raise FormatError(f"{where}.torsion", "expected a list")
    try:
        obj = AbObj(free, tuple(_int(t, f"{where}.torsion") for t in tors))
    except ValueError as e:
        raise FormatError(where, str(e)) from e
    return presentation_of(obj)


def module_from_json(doc) -> PersistenceModule:
    _check_format(doc)
    dim = _int(_need(doc, "dim", "$"), "$.dim")
    axes = _need(doc, "axes", "$")
    if not isinstance(axes, list) or len(axes) != dim:
        raise FormatError("$.axes", f"expected {dim} axes")
    parsed = [[parse_rational(c, f"$.axes[{k}][{i}]") for i, c in enumerate(ax)] for k, ax in enumerate(axes)]
    try:
        poset = GridPoset.embedded(parsed)
    except ValueError as e:
        raise FormatError("$.axes", str(e)) from e
    coeff = _coefficients(doc)
    objs = _need(doc, "objects", "$")
    if not isinstance(objs, dict):
        raise FormatError("$.objects", "expected an object")
    objects = {}
    for key, spec in objs.items():
        where = f"$.objects[{key!r}]"
        idx = _parse_index(key, dim, where)
        objects[idx] = _object(spec, coeff, where)
    for idx in poset.indices():
        if idx not in objects:
            raise FormatError("$.objects", f"no object at grid index {_index_key(idx)!r}")
    raw_edges = _need(doc, "edges", "$")
    if not isinstance(raw_edges, dict):
        raise FormatError("$.edges", "expected an object")
    edges = {}
    for key, rows in raw_edges.items():
        where = f"$.edges[{key!r}]"
        if "->" not in key:
            raise FormatError(where, "edge keys look like 'i,j->k,l'")
        src, dst = (_parse_index(s, dim, where) for s in key.split("->", 1))
        diff = [b - a for a, b in zip(src, dst)]
        if sorted(diff) != [0] * (dim - 1) + [1]:
            raise FormatError(where, "an edge must step up exactly one axis")
        if src not in objects or dst not in objects:
            raise FormatError(where, "edge endpoint outside the grid")
        edges[(src, diff.index(1))] = _matrix(rows, objects[dst].gens, objects[src].gens, where)
    try:
        return PersistenceModule(poset, coeff, objects, edges)
    except ValueError as e:
        raise FormatError("$", str(e)) from e


def _object_json(p: Presentation) -> dict:
    if p.is_canonical():
        obj = p.to_object()
        if p.coeff.is_field:
            return {"dim": obj.dim}
        return {"free": obj.free_rank, "torsion": list(obj.invariant_factors)}
    return {"gens": p.gens, "relations": p.relations.tolist()}


def module_to_json(m: PersistenceModule) -> dict:
    coeff = {"kind": "field", "p": m.coefficients.p} if m.coefficients.is_field else {"kind": "int"}
    edges = {}
    for (idx, axis), mat in m.edges.items():
        dst = tuple(i + (k == axis) for k, i in enumerate(idx))
        edges[f"{_index_key(idx)}->{_index_key(dst)}"] = mat.tolist()
    return {
        "format": FORMAT,
        "dim": m.dim,
        "axes": [[format_rational(c) for c in ax] for ax in m.poset.axes],
        "coefficients": coeff,
        "objects": {_index_key(idx): _object_json(p) for idx, p in m.objects.items()},
        "edges": edges,
    }


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}:{e.colno}", e.msg) from e
    except OSError as e:
        raise FormatError(path, e.strerror or str(e)) from e


def read_module(path: str) -> PersistenceModule:
    try:
        return module_from_json(load_json(path))
    except FormatError as e:
        if e.location.startswith(path):
            raise
        raise FormatError(f"{path}:{e.location}", e.message) from e


def write_module(m: PersistenceModule, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(module_to_json(m)))


def size_pair_from_json(doc) -> SizePair:
    _check_format(doc)
    verts = _need(doc, "vertices", "$")
    if not isinstance(verts, list):
        raise FormatError("$.vertices", "expected a list")
    names = {str(v): v for v in verts}
    if len(names) != len(verts):
        raise FormatError("$.vertices", "duplicate vertex ids")
    simplices = doc.get("simplices", [])
    for i, s in enumerate(simplices):
        if not isinstance(s, list) or any(str(v) not in names for v in s):
            raise FormatError(f"$.simplices[{i}]", "simplex uses an unknown vertex")
    values = _need(doc, "values", "$")
    if not isinstance(values, dict):
        raise FormatError("$.values", "expected an object")
    vals = {}
    for key, x in values.items():
        where = f"$.values[{key!r}]"
        if key not in names:
            raise FormatError(where, "unknown vertex")
        xs = x if isinstance(x, list) else [x]
        vals[names[key]] = tuple(parse_rational(c, f"{where}") for c in xs)
    try:
        K = SimplicialComplex.from_maximal([tuple(names[str(v)] for v in s) for s in simplices], verts)
        return SizePair(K, vals)
    except (ValueError, TypeError) as e:
        raise FormatError("$", str(e)) from e


def size_pair_to_json(S: SizePair) -> dict:
    maximal = [s for s in S.space.simplices
               if len(s) > 1 and not any(set(s) < set(t) for t in S.space.simplices)]
    return {
        "format": FORMAT,
        "vertices": list(S.space.vertices),
        "simplices": sorted(list(s) for s in maximal),
        "values": {str(v): [format_rational(c) for c in x] for v, x in S.values.items()},
    }


def read_size_pair(path: str) -> SizePair:
    try:
        return size_pair_from_json(load_json(path))
    except FormatError as e:
        if e.location.startswith(path):
            raise
        raise FormatError(f"{path}:{e.location}", e.message) from e
