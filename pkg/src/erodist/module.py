"""Persistence modules on finite grids and their rank invariants.

A module stores one :class:`~erodist.category.Presentation` per grid point
and one matrix per cover edge ``i -> i + e_k``. Off-grid points are handled
by the step extension: snap down to the grid, saturate above it, and use the
zero object below it.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple, Sequence

from .algebra import IntMatrix
from .category import (
    CatObject,
    Coefficients,
    Presentation,
    image_object,
    is_morphism,
    morphisms_equal,
    preorder_leq,
)
from .poset import BOTTOM, EMBEDDED_GRID, INTEGER_LATTICE, DgmPoint, GridPoset, point


class ModuleValidationError(ValueError):
    pass


class SquareViolation(NamedTuple):
    corner: tuple[int, ...]
    axes: tuple[int, int]

    def __str__(self):
        return f"square at {self.corner} on axes {self.axes} does not commute"


def _unit(dim: int, k: int) -> tuple[int, ...]:
    return tuple(1 if i == k else 0 for i in range(dim))


def _add(idx, step):
    return tuple(i + s for i, s in zip(idx, step))


class PersistenceModule:
    """Functor from a finite embedded grid into Vect (over F_p) or Ab.

    ``edges[(i, k)]`` is the matrix of ``F(i <= i + e_k)`` on generators.
    Construction validates shapes, relation compatibility, and commutativity
    of every elementary square.
    """

    def __init__(
        self,
        poset: GridPoset,
        coefficients: Coefficients,
        objects: Mapping[tuple[int, ...], Presentation],
        edges: Mapping[tuple[tuple[int, ...], int], IntMatrix],
        validate: bool = True,
    ):
        if poset.kind != EMBEDDED_GRID:
            raise ModuleValidationError("persistence modules live on finite embedded grids")
        self.poset = poset
        self.coefficients = coefficients
        self.objects = dict(objects)
        self.edges = {}
        for key, mat in edges.items():
            self.edges[key] = mat.mod(coefficients.p) if coefficients.is_field else mat
        self._paths: dict = {}
        if validate:
            self._check_structure()
            bad = validate_functoriality(self)
            if bad is not None:
                raise ModuleValidationError(str(bad))

    @property
    def dim(self) -> int:
        return self.poset.dim

    def _check_structure(self) -> None:
        expected = set(self.poset.indices())
        if set(self.objects) != expected:
            missing = sorted(expected - set(self.objects))
            extra = sorted(set(self.objects) - expected)
            raise ModuleValidationError(f"objects do not match the grid (missing {missing}, extra {extra})")
        for idx, pres in self.objects.items():
            if pres.coeff != self.coefficients:
                raise ModuleValidationError(f"object at {idx} has coefficients {pres.coeff}")
        shape = self.poset.shape
        wanted = {(idx, k) for idx in expected for k in range(self.dim) if idx[k] + 1 < shape[k]}
        if set(self.edges) != wanted:
            raise ModuleValidationError(
                f"edge set mismatch (missing {sorted(wanted - set(self.edges))}, extra {sorted(set(self.edges) - wanted)})"
            )
        for (idx, k), mat in self.edges.items():
            src, dst = self.objects[idx], self.objects[_add(idx, _unit(self.dim, k))]
            if mat.shape != (dst.gens, src.gens):
                raise ModuleValidationError(f"edge {idx} along axis {k} has shape {mat.shape}, expected {(dst.gens, src.gens)}")
            if not is_morphism(mat, src, dst):
                raise ModuleValidationError(f"edge {idx} along axis {k} does not respect relations")

    def object_at(self, idx) -> CatObject:
        if idx is BOTTOM:
            return self.coefficients.zero_object()
        return self.objects[tuple(idx)].to_object()

    def transition_map_idx(self, a: Sequence[int], b: Sequence[int]) -> IntMatrix:
        """Composite along the staircase path that exhausts axis 0 first."""
        a, b = tuple(a), tuple(b)
        if any(x > y for x, y in zip(a, b)):
            raise ValueError(f"{a} is not below {b}")
        key = (a, b)
        cached = self._paths.get(key)
        if cached is not None:
            return cached
        n = self.objects[a].gens
        mat = IntMatrix.identity(n)
        cur = a
        for k in range(self.dim):
            for _ in range(b[k] - cur[k]):
                mat = self.edges[(cur, k)] @ mat
                if self.coefficients.is_field:
                    mat = mat.mod(self.coefficients.p)
                cur = _add(cur, _unit(self.dim, k))
        self._paths[key] = mat
        return mat

    def path_maps(self, a: Sequence[int], b: Sequence[int]):
        """Every monotone lattice path composite from a to b (for path-independence checks)."""
        a, b = tuple(a), tuple(b)
        if a == b:
            yield IntMatrix.identity(self.objects[a].gens)
            return
        for k in range(self.dim):
            if a[k] < b[k]:
                nxt = _add(a, _unit(self.dim, k))
                step = self.edges[(a, k)]
                for rest in self.path_maps(nxt, b):
                    m = rest @ step
                    yield m.mod(self.coefficients.p) if self.coefficients.is_field else m

    def step_lookup(self, x: Sequence):
        return self.poset.step_lookup(point(x))


def validate_functoriality(m: PersistenceModule) -> SquareViolation | None:
    """First elementary square whose two paths disagree (modulo relations), or None."""
    shape = m.poset.shape
    for idx in m.poset.indices():
        for k in range(m.dim):
            for j in range(k + 1, m.dim):
                if idx[k] + 1 >= shape[k] or idx[j] + 1 >= shape[j]:
                    continue
                ek, ej = _unit(m.dim, k), _unit(m.dim, j)
                via_k = m.edges[(_add(idx, ek), j)] @ m.edges[(idx, k)]
                via_j = m.edges[(_add(idx, ej), k)] @ m.edges[(idx, j)]
                target = m.objects[_add(_add(idx, ek), ej)]
                if not morphisms_equal(via_k, via_j, target):
                    return SquareViolation(idx, (k, j))
    return None


def transition_map(m: PersistenceModule, a: Sequence, b: Sequence) -> IntMatrix:
    """F(a <= b) for points of the step-extended module."""
    a, b = point(a), point(b)
    if any(x > y for x, y in zip(a, b)):
        raise ValueError(f"{a} is not below {b}")
    ia, ib = m.poset.step_lookup(a), m.poset.step_lookup(b)
    if ib is BOTTOM:
        return IntMatrix.zeros(0, 0)
    if ia is BOTTOM:
        return IntMatrix.zeros(m.objects[ib].gens, 0)
    return m.transition_map_idx(ia, ib)


def rank_invariant_at(m: PersistenceModule, d: DgmPoint) -> CatObject:
    return RankInvariant(m).evaluate(d.a, d.b)


class RankInvariant:
    """The map (a, b) -> im F(a < b) of a step-extended grid module.

    With ``lattice=True`` the domain is Z^n instead of R^n (the grid must then
    have integer coordinates).

    The erosion routines consume any object exposing ``dim``, ``domain``,
    ``breakpoints(k)``, ``key(k, x)``, ``value(ka, kb)``, ``leq`` and
    ``evaluate``; keys are monotone in x and values depend only on keys.
    """

    def __init__(self, module: PersistenceModule, lattice: bool = False):
        if lattice and not module.poset.is_integral():
            raise ValueError("lattice rank invariants need integer grid coordinates")
        self.module = module
        self.dim = module.dim
        self.domain = INTEGER_LATTICE if lattice else EMBEDDED_GRID
        self.zero = module.coefficients.zero_object()
        self.least = self.zero
        self._memo: dict = {}

    @property
    def coefficients(self) -> Coefficients:
        return self.module.coefficients

    def breakpoints(self, k: int):
        return self.module.poset.axes[k]

    def key(self, k: int, x) -> int:
        return self.module.poset.axis_step(k, x)

    def leq(self, x: CatObject, y: CatObject) -> bool:
        return preorder_leq(x, y)

    def value(self, ka: tuple[int, ...], kb: tuple[int, ...]) -> CatObject:
        memo_key = (ka, kb)
        out = self._memo.get(memo_key)
        if out is None:
            if min(ka) < 0:
                out = self.zero
            else:
                m = self.module
                out = image_object(m.transition_map_idx(ka, kb), m.objects[ka], m.objects[kb])
            self._memo[memo_key] = out
        return out

    def evaluate(self, a, b) -> CatObject:
        a, b = point(a), point(b)
        if not DgmPoint(a, b).is_valid():
            raise ValueError(f"({a}, {b}) is not in the diagram domain")
        if self.domain == INTEGER_LATTICE and any(c.denominator != 1 for c in a + b):
            raise ValueError("lattice rank invariants take integer points")
        ka = tuple(self.key(k, x) for k, x in enumerate(a))
        kb = tuple(self.key(k, x) for k, x in enumerate(b))
        return self.value(ka, kb)

    __call__ = evaluate


def module_from_generators(
    poset: GridPoset,
    coefficients: Coefficients,
    births: Sequence[Sequence[int]],
    relations: Sequence[tuple[Sequence[int], Sequence[int]]] = (),
) -> PersistenceModule:
    """Finitely presented module: generator g appears at grid index ``births[g]``;
    each relation ``(index, vector)`` kills ``vector`` (over all generators) from
    ``index`` on. Structure maps are inclusions of generator sets, so the result
    is functorial by construction.
    """
    n_gens = len(births)
    births = [tuple(b) for b in births]
    rels = [(tuple(c), list(v)) for c, v in relations]
    for c, v in rels:
        if len(v) != n_gens:
            raise ModuleValidationError("relation vector length must equal the generator count")
        for g, x in enumerate(v):
            if x and any(bi > ci for bi, ci in zip(births[g], c)):
                raise ModuleValidationError(f"relation born at {c} uses generator {g} born at {births[g]}")

    def alive(idx):
        return [g for g in range(n_gens) if all(bi <= ii for bi, ii in zip(births[g], idx))]

    objects = {}
    live = {}
    for idx in poset.indices():
        gens = alive(idx)
        live[idx] = gens
        active = [v for c, v in rels if all(ci <= ii for ci, ii in zip(c, idx))]
        cols = [[v[g] for g in gens] for v in active]
        rel = IntMatrix.from_columns(cols, len(gens)) if cols else IntMatrix.zeros(len(gens), 0)
        objects[idx] = Presentation(len(gens), rel, coefficients)
    edges = {}
    shape = poset.shape
    for idx in poset.indices():
        for k in range(poset.dim):
            if idx[k] + 1 < shape[k]:
                nxt = _add(idx, _unit(poset.dim, k))
                src, dst = live[idx], live[nxt]
                pos = {g: i for i, g in enumerate(dst)}
                rows = [[1 if pos[g] == r else 0 for g in src] for r in range(len(dst))]
                edges[(idx, k)] = IntMatrix.from_rows(rows, len(src)) if dst else IntMatrix.zeros(0, len(src))
    return PersistenceModule(poset, coefficients, objects, edges)


def interval_module(poset: GridPoset, coefficients: Coefficients, lo, hi=None, order: int = 0) -> PersistenceModule:
    """Rectangle module born at grid index ``lo`` and dying at index ``hi[k]`` along each axis.

    ``hi[k] = None`` (or an index past the grid) means no death along axis k.
    With ``order > 0`` (integers only) the class survives as Z/order instead of
    dying, giving a torsion rectangle.
    """
    lo = tuple(lo)
    hi = tuple(hi) if hi is not None else (None,) * poset.dim
    rels = []
    for k in range(poset.dim):
        if hi[k] is not None and hi[k] < poset.shape[k]:
            c = list(lo)
            c[k] = hi[k]
            rels.append((tuple(c), [1]))
    if order:
        rels = [(lo, [order])]
    return module_from_generators(poset, coefficients, [lo], rels)


def direct_sum(*modules: PersistenceModule) -> PersistenceModule:
    first = modules[0]
    for m in modules[1:]:
        if m.poset != first.poset or m.coefficients != first.coefficients:
            raise ModuleValidationError("direct sums need a common grid and coefficients")
    objects, edges = {}, {}
    for idx in first.poset.indices():
        pres = [m.objects[idx] for m in modules]
        objects[idx] = Presentation(sum(p.gens for p in pres), _block_diag([p.relations for p in pres]), first.coefficients)
    for key in first.edges:
        edges[key] = _block_diag([m.edges[key] for m in modules])
    return PersistenceModule(first.poset, first.coefficients, objects, edges)


def _block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(rows, cols, (x for r in out for x in r))
