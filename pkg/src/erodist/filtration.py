"""Sublevel filtrations of finite simplicial complexes and their homology modules.

Homology is simplicial, with integer or prime-field coefficients. A degree-k
homology group is presented as Z_k modulo the boundaries written in a fixed
basis of cycles, so induced maps are plain integer matrices between those
presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .algebra import (
    IntMatrix,
    NotNestedError,
    integer_kernel_basis,
    nullspace_mod_p,
    solve_integer,
    solve_mod_p,
)
from .category import Coefficients, Presentation, SetObj, morphisms_equal, preorder_leq
from .erosion import erosion_distance_family, erosion_distance_restricted
from .module import PersistenceModule, RankInvariant
from .poset import EMBEDDED_GRID, INF, GridPoset, SuperlinearFamily, as_fraction, leq_points

NPD_MAX_POINTS = 8


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    simplices: frozenset

    def __post_init__(self):
        simp = frozenset(tuple(sorted(s)) for s in self.simplices)
        verts = tuple(sorted(set(self.vertices) | {v for s in simp for v in s}))
        simp = simp | {(v,) for v in verts}
        for s in simp:
            for k in range(1, len(s)):
                for face in combinations(s, k):
                    if face not in simp:
                        raise ValueError(f"face {face} of {s} is missing")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "simplices", simp)

    @classmethod
    def from_maximal(cls, facets, vertices=()) -> "SimplicialComplex":
        """Downward closure of the given simplices."""
        simp = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                simp.update(combinations(f, k))
        return cls(tuple(vertices), frozenset(simp))

    @classmethod
    def discrete(cls, points) -> "SimplicialComplex":
        return cls(tuple(points), frozenset())

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def cells(self, k: int) -> list[tuple]:
        """k-simplices in a fixed (sorted) order; this order indexes chain vectors."""
        return sorted(s for s in self.simplices if len(s) == k + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def full_subcomplex(self, keep) -> "SimplicialComplex":
        keep = set(keep)
        return SimplicialComplex(tuple(v for v in self.vertices if v in keep),
                                 frozenset(s for s in self.simplices if set(s) <= keep))


def rp2_triangulation() -> SimplicialComplex:
    """The minimal 6-vertex triangulation of the real projective plane."""
    return SimplicialComplex.from_maximal([
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
    ])


@dataclass(frozen=True)
class SizePair:
    """A space with an R^n-valued function on its vertices."""

    space: SimplicialComplex
    values: dict = field(hash=False)

    def __post_init__(self):
        vals = {v: tuple(as_fraction(c) for c in (x if isinstance(x, (tuple, list)) else (x,)))
                for v, x in self.values.items()}
        missing = set(self.space.vertices) - set(vals)
        if missing:
            raise ValueError(f"function undefined on vertices {sorted(missing)}")
        dims = {len(x) for x in vals.values()}
        if len(dims) > 1:
            raise ValueError("function values have mixed dimensions")
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return len(next(iter(self.values.values()))) if self.values else 1

    def is_discrete(self) -> bool:
        return self.space.dimension <= 0


def sublevel_complex(K: SimplicialComplex, phi: dict, a) -> SimplicialComplex:
    """Full subcomplex on vertices with phi(v) <= a componentwise (lower-star)."""
    a = tuple(as_fraction(c) for c in (a if isinstance(a, (tuple, list)) else (a,)))
    keep = []
    for v in K.vertices:
        x = phi[v]
        x = x if isinstance(x, tuple) else (as_fraction(x),)
        if leq_points(x, a):
            keep.append(v)
    return K.full_subcomplex(keep)


def boundary_matrix(K: SimplicialComplex, k: int) -> IntMatrix:
    """d_k : C_k -> C_{k-1}; rows index (k-1)-cells, columns k-cells."""
    cols = K.cells(k)
    if k == 0:
        return IntMatrix.zeros(0, len(cols))
    rows = {s: i for i, s in enumerate(K.cells(k - 1))}
    entries = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            entries[rows[s[:i] + s[i + 1:]]][j] = (-1) ** i
    return IntMatrix.from_rows(entries, len(cols)) if rows else IntMatrix.zeros(0, len(cols))


def _columns(vs, rows: int) -> IntMatrix:
    return IntMatrix.from_columns(vs, rows) if vs else IntMatrix.zeros(rows, 0)


@dataclass(frozen=True)
class Homology:
    """H_k as Z_k / B_k; ``cycles`` holds one chain column per generator."""

    complex: SimplicialComplex
    degree: int
    coeff: Coefficients
    cycles: IntMatrix
    presentation: Presentation

    @property
    def object(self):
        return self.presentation.to_object()

    def express(self, chains: IntMatrix) -> IntMatrix:
        """Coordinates of cycle chains in the stored cycle basis."""
        if self.coeff.is_field:
            p = self.coeff.p
            cols = []
            for c in chains.columns():
                x = solve_mod_p(self.cycles, c, p)
                if x is None:
                    raise ArithmeticError("chain is not a cycle of this complex")
                cols.append(x)
            return _columns(cols, self.cycles.cols)
        try:
            return solve_integer(self.cycles, chains)
        except NotNestedError as e:
            raise ArithmeticError("chain is not a cycle of this complex") from e


def homology(K: SimplicialComplex, k: int, coeff: Coefficients) -> Homology:
    if k < 0:
        raise ValueError("degree must be non-negative")
    n = len(K.cells(k))
    d_k = boundary_matrix(K, k)
    d_up = boundary_matrix(K, k + 1)
    if d_up.rows != n:  # no (k+1)-cells
        d_up = IntMatrix.zeros(n, 0)
    if coeff.is_field:
        p = coeff.p
        cycles = _columns(nullspace_mod_p(d_k, p), n) if d_k.rows else IntMatrix.identity(n)
        rels = []
        for c in d_up.columns():
            x = solve_mod_p(cycles, c, p)
            if x is None:
                raise ArithmeticError("boundary outside the cycle space")
            rels.append(x)
        rel = _columns(rels, cycles.cols)
    else:
        cycles = integer_kernel_basis(d_k) if d_k.rows else IntMatrix.identity(n)
        rel = solve_integer(cycles, d_up) if d_up.cols else IntMatrix.zeros(cycles.cols, 0)
    return Homology(K, k, coeff, cycles, Presentation(cycles.cols, rel, coeff))


def _permutation_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def chain_map(Ka: SimplicialComplex, Kb: SimplicialComplex, k: int, vertex_map=None) -> IntMatrix:
    """Simplicial chain map C_k(Ka) -> C_k(Kb); degenerate images vanish."""
    src, dst = Ka.cells(k), Kb.cells(k)
    index = {s: i for i, s in enumerate(dst)}
    entries = [[0] * len(src) for _ in dst]
    for j, s in enumerate(src):
        img = [vertex_map[v] for v in s] if vertex_map is not None else list(s)
        if len(set(img)) < len(img):
            continue
        t = tuple(sorted(img))
        if t not in index:
            raise ValueError(f"{s} maps to {t}, which is not a simplex of the target")
        entries[index[t]][j] = _permutation_sign(img)
    return IntMatrix.from_rows(entries, len(src)) if dst else IntMatrix.zeros(0, len(src))


def induced_homology_map(Ha: Homology, Hb: Homology, vertex_map=None) -> IntMatrix:
    """Matrix of H_k(Ka) -> H_k(Kb) from the stored cycle representatives.

    Without ``vertex_map`` this is the map induced by the inclusion Ka in Kb.
    """
    if Ha.degree != Hb.degree or Ha.coeff != Hb.coeff:
        raise ValueError("homology groups of different degree or coefficients")
    pushed = chain_map(Ha.complex, Hb.complex, Ha.degree, vertex_map) @ Ha.cycles
    if Ha.coeff.is_field:
        pushed = pushed.mod(Ha.coeff.p)
    return Hb.express(pushed)


def module_from_size_pair(S: SizePair, grid: GridPoset, k: int, coeff: Coefficients,
                          validate: bool = True) -> PersistenceModule:
    """H_k of the sublevel complexes at every grid point, with inclusion-induced maps."""
    if grid.kind != EMBEDDED_GRID:
        raise ValueError("size-pair modules live on embedded grids")
    if grid.dim != S.dim:
        raise ValueError(f"grid has dimension {grid.dim}, the function {S.dim}")
    hom = {}
    for idx in grid.indices():
        hom[idx] = homology(sublevel_complex(S.space, S.values, grid.coords(idx)), k, coeff)
    objects = {idx: h.presentation for idx, h in hom.items()}
    edges = {}
    for idx in hom:
        for axis in range(grid.dim):
            nxt = tuple(i + (j == axis) for j, i in enumerate(idx))
            if nxt in hom:
                edges[(idx, axis)] = induced_homology_map(hom[idx], hom[nxt])
    return PersistenceModule(grid, coeff, objects, edges, validate=validate)


def value_grid(*pairs: SizePair) -> GridPoset:
    """Embedded grid on all function values of the given size pairs, per axis."""
    n = pairs[0].dim
    axes = []
    for k in range(n):
        axes.append(sorted({x[k] for S in pairs for x in S.values.values()}))
    return GridPoset.embedded(axes)


def size_pair_modules(S1: SizePair, S2: SizePair, k: int, coeff: Coefficients):
    """Both homology modules on a common grid of function values."""
    grid = value_grid(S1, S2)
    return module_from_size_pair(S1, grid, k, coeff), module_from_size_pair(S2, grid, k, coeff)


def size_pair_erosion_distance(S1: SizePair, S2: SizePair, k: int, coeff: Coefficients,
                               restricted: bool = False):
    m1, m2 = size_pair_modules(S1, S2, k, coeff)
    fam = SuperlinearFamily.linear(S1.dim)
    f, g = RankInvariant(m1), RankInvariant(m2)
    rep = erosion_distance_restricted(f, g, fam) if restricted else erosion_distance_family(f, g, fam)
    return rep.distance


class LevelSetInvariant:
    """(a, b) -> f^-1([a, b]) for f: X -> Q, valued in finite sets under reverse inclusion."""

    dim = 1
    domain = EMBEDDED_GRID

    def __init__(self, values: dict):
        self.values = {x: as_fraction(v) for x, v in values.items()}
        self.levels = sorted(set(self.values.values()))
        self.least = SetObj(frozenset(self.values))
        self._keys = [(x, self._key(v)) for x, v in self.values.items()]
        self._memo: dict = {}

    def _key(self, x) -> int:
        from bisect import bisect_left

        i = bisect_left(self.levels, x)
        if i < len(self.levels) and self.levels[i] == x:
            return 2 * i + 1
        return 2 * i

    def breakpoints(self, k):
        return self.levels

    def key(self, k, x):
        return self._key(x)

    @staticmethod
    def leq(x, y):
        return preorder_leq(x, y)

    def value(self, ka, kb):
        out = self._memo.get((ka, kb))
        if out is None:
            out = SetObj(frozenset(x for x, key in self._keys if ka[0] <= key <= kb[0]))
            self._memo[(ka, kb)] = out
        return out

    def evaluate(self, a, b):
        a, b = as_fraction(a[0]), as_fraction(b[0])
        if not a < b:
            raise ValueError(f"({a}, {b}) is not in the diagram domain")
        return SetObj(frozenset(x for x, v in self.values.items() if a <= v <= b))


def levelset_invariant_distance(f: LevelSetInvariant | dict, g: LevelSetInvariant | dict):
    f = f if isinstance(f, LevelSetInvariant) else LevelSetInvariant(f)
    g = g if isinstance(g, LevelSetInvariant) else LevelSetInvariant(g)
    if set(f.values) != set(g.values):
        raise ValueError("level-set invariants on different sets")
    return erosion_distance_family(f, g, SuperlinearFamily.linear(1)).distance


def linf_distance(f: dict, g: dict) -> Fraction:
    if set(f) != set(g):
        raise ValueError("functions on different sets")
    return max((abs(as_fraction(f[x]) - as_fraction(g[x])) for x in f), default=Fraction(0))


def _sup_norm(x, y) -> Fraction:
    return max(abs(a - b) for a, b in zip(x, y))


def npd_optimal(S1: SizePair, S2: SizePair):
    """(cost, bijection) minimizing max_x |phi(x) - psi(h(x))|_inf over bijections h.

    Only finite discrete spaces are supported, where homeomorphisms are exactly
    the bijections. Returns (INF, None) when the point counts differ.
    """
    if not (S1.is_discrete() and S2.is_discrete()):
        raise ValueError("only finite discrete spaces are supported")
    xs, ys = list(S1.space.vertices), list(S2.space.vertices)
    if max(len(xs), len(ys)) > NPD_MAX_POINTS:
        raise ValueError(f"natural pseudo-distance brute force is capped at {NPD_MAX_POINTS} points")
    if len(xs) != len(ys):
        return INF, None
    if S1.dim != S2.dim:
        raise ValueError("functions of different dimensions")
    best, best_h = INF, None
    for perm in permutations(ys):
        cost = max((_sup_norm(S1.values[x], S2.values[y]) for x, y in zip(xs, perm)), default=Fraction(0))
        if cost < best:
            best, best_h = cost, dict(zip(xs, perm))
    return best, best_h


def npd_bruteforce(S1: SizePair, S2: SizePair):
    return npd_optimal(S1, S2)[0]


def interleaving_triangles_commute(S1: SizePair, S2: SizePair, h: dict, eps, points, k: int,
                                   coeff: Coefficients) -> bool:
    """Check that h and h^-1 induce an eps-interleaving of the H_k sublevel modules.

    For each sample point a the composites H(X<=a) -> H(Y<=a+eps) -> H(X<=a+2eps)
    and the symmetric one must equal the inclusion-induced maps.
    """
    eps = as_fraction(eps)
    inv = {y: x for x, y in h.items()}

    def hom(S, a):
        return homology(sublevel_complex(S.space, S.values, a), k, coeff)

    for a in points:
        a = tuple(as_fraction(c) for c in a)
        a1 = tuple(c + eps for c in a)
        a2 = tuple(c + 2 * eps for c in a)
        for A, B, fwd, back in ((S1, S2, h, inv), (S2, S1, inv, h)):
            h0, h1, h2 = hom(A, a), hom(B, a1), hom(A, a2)
            there = induced_homology_map(h0, h1, fwd)
            back_ = induced_homology_map(h1, h2, back)
            direct = induced_homology_map(h0, h2)
            if not morphisms_equal(back_ @ there, direct, h2.presentation):
                return False
    return True
