"""One-parameter modules: type-B diagrams by Moebius inversion, and barcodes.

A constructible module R -> Vect is stored as a grid module on its critical
values. Its diagram is the Moebius inversion of

    dF(a, b) = dim im F(a < b - delta)   (delta small),

which counts bars [s, t) with s <= a and t >= b. The barcode and the
bottleneck distance are kept as an independent oracle for the interleaving
distance.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

import networkx as nx
from networkx.algorithms.bipartite import hopcroft_karp_matching

from .category import Coefficients
from .erosion import erosion_distance_family
from .module import PersistenceModule, RankInvariant, direct_sum, interval_module
from .poset import INF, DgmPoint, GridPoset, SuperlinearFamily, as_fraction


@dataclass(frozen=True)
class ConstructibleModule:
    """A 1-D field module; zero before the first critical value, constant after the last."""

    module: PersistenceModule

    def __post_init__(self):
        m = self.module
        if m.dim != 1:
            raise ValueError("constructible modules are one-parameter")
        if not m.coefficients.is_field:
            raise ValueError("constructible modules need field coefficients")

    @classmethod
    def from_bars(cls, bars, coefficients: Coefficients, critical_values=None) -> "ConstructibleModule":
        """Direct sum of interval modules [b, d); ``d = INF`` never dies."""
        bars = [(as_fraction(b), d if d == INF else as_fraction(d)) for b, d in bars]
        vals = set(critical_values or [])
        for b, d in bars:
            if not d > b:
                raise ValueError(f"bar [{b}, {d}) is empty")
            vals.add(b)
            if d != INF:
                vals.add(d)
        if not vals:
            vals = {Fraction(0)}
        axis = sorted(as_fraction(v) for v in vals)
        poset = GridPoset.embedded([axis])
        if not bars:
            return cls(interval_module(poset, coefficients, (0,), (0,)))
        parts = [
            interval_module(poset, coefficients, (axis.index(b),), None if d == INF else (axis.index(d),))
            for b, d in bars
        ]
        return cls(direct_sum(*parts) if len(parts) > 1 else parts[0])

    @property
    def critical_values(self) -> tuple:
        return self.module.poset.axes[0]

    @property
    def p(self) -> int:
        return self.module.coefficients.p

    def rank(self, i: int, j: int) -> int:
        """dim im F(s_i <= s_j) on grid indices; 0 when i < 0."""
        if i < 0:
            return 0
        return self.rank_invariant.value((i,), (j,)).dim

    @cached_property
    def rank_invariant(self) -> RankInvariant:
        return RankInvariant(self.module)


def dgm_b_value(F: ConstructibleModule, d) -> int:
    """dim im F(a < b - delta) for all small delta > 0."""
    a, b = (d.a[0], d.b[0]) if isinstance(d, DgmPoint) else (as_fraction(d[0]), as_fraction(d[1]))
    if not a < b:
        raise ValueError(f"({a}, {b}) is not in the diagram domain")
    axis = F.critical_values
    i = bisect_right(axis, a) - 1
    j = bisect_left(axis, b) - 1
    if i < 0:
        return 0
    return F.rank(i, j)


class TypeBDiagram:
    """Finitely supported integer masses on points (birth, death); death may be INF."""

    def __init__(self, masses=None):
        clean = {}
        for (b, d), m in dict(masses or {}).items():
            b = as_fraction(b)
            d = d if d == INF else as_fraction(d)
            if not d > b:
                raise ValueError(f"diagram point ({b}, {d}) is not above the diagonal")
            m = int(m)
            if m:
                clean[(b, d)] = clean.get((b, d), 0) + m
        self.masses = {k: v for k, v in clean.items() if v}

    def __eq__(self, other):
        return isinstance(other, TypeBDiagram) and self.masses == other.masses

    def __repr__(self):
        return f"TypeBDiagram({self.masses!r})"

    def __iter__(self):
        return iter(sorted(self.masses.items(), key=lambda kv: (kv[0][0], kv[0][1])))

    def __len__(self):
        return len(self.masses)

    def coordinates(self) -> list:
        out = set()
        for b, d in self.masses:
            out.add(b)
            if d != INF:
                out.add(d)
        return sorted(out)

    def cumulative(self, a, b) -> int:
        """Sum of masses at (s, t) with s <= a and t >= b."""
        return sum(m for (s, t), m in self.masses.items() if s <= a and t >= b)

    def is_nonnegative(self) -> bool:
        return all(m > 0 for m in self.masses.values())


def mobius_invert(dF, critical_values) -> TypeBDiagram:
    """Invert ``dF(a, b) = sum of masses at (s, t) with s <= a, t >= b`` on a critical grid.

    ``dF`` is a callable on (a, b). Deaths at the sentinel past the last critical
    value are read as INF. Raises ValueError when the cumulative sums do not
    reproduce ``dF`` between grid points (no finitely supported inversion there).
    """
    cs = sorted(as_fraction(c) for c in critical_values)
    if not cs:
        return TypeBDiagram()
    grid = cs + [cs[-1] + 1]
    n = len(grid)

    def r(i, j):
        if i < 0 or j >= n:
            return 0
        return dF(grid[i], grid[j])

    masses = {}
    for i in range(n - 1):
        for j in range(i + 1, n):
            m = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if m:
                masses[(grid[i], INF if j == n - 1 else grid[j])] = m
    out = TypeBDiagram(masses)
    # the inversion must agree off the grid too
    probes = [cs[0] - 1] + [x for k, x in enumerate(cs) for x in (x, (x + grid[k + 1]) / 2)] + [grid[-1] + 1]
    for x in probes:
        for y in probes:
            if x < y and out.cumulative(x, y) != dF(x, y):
                raise ValueError(f"no finitely supported inversion on this grid: mismatch at ({x}, {y})")
    return out


def diagram_of(F: ConstructibleModule) -> TypeBDiagram:
    return mobius_invert(lambda a, b: dgm_b_value(F, (a, b)), F.critical_values)


def diagram_leq(F_B: TypeBDiagram, G_B: TypeBDiagram) -> bool:
    """Upper-set sums of F_B are at most those of G_B everywhere."""
    cs = sorted(set(F_B.coordinates()) | set(G_B.coordinates()))
    if not cs:
        return True
    tops = cs + [cs[-1] + 1]
    for a in cs:
        for b in tops:
            if a < b and F_B.cumulative(a, b) > G_B.cumulative(a, b):
                return False
    return True


class _DiagramCounts:
    """Cumulative mass function of a diagram, shaped as an erosion invariant."""

    dim = 1
    domain = "embedded"
    least = 0

    def __init__(self, diagram: TypeBDiagram, coords):
        self.diagram = diagram
        self.coords = list(coords)
        self.monotone = diagram.is_nonnegative()
        self._pts = [(self._key(s), self._key(t), m) for (s, t), m in diagram.masses.items()]
        self._memo: dict = {}

    def _key(self, x) -> int:
        i = bisect_left(self.coords, x)
        if i < len(self.coords) and self.coords[i] == x:
            return 2 * i + 1
        return 2 * i

    def breakpoints(self, k):
        return self.coords

    def key(self, k, x):
        return self._key(x)

    @staticmethod
    def leq(x, y):
        return x <= y

    def value(self, ka, kb):
        memo = self._memo.get((ka, kb))
        if memo is None:
            memo = sum(m for s, t, m in self._pts if s <= ka[0] and t >= kb[0])
            self._memo[(ka, kb)] = memo
        return memo

    def evaluate(self, a, b):
        return self.diagram.cumulative(as_fraction(a[0]), as_fraction(b[0]))


def _counts(F_B: TypeBDiagram) -> _DiagramCounts:
    return _DiagramCounts(F_B, F_B.coordinates())


def diagram_erosion_report(F_B: TypeBDiagram, G_B: TypeBDiagram):
    return erosion_distance_family(_counts(F_B), _counts(G_B), SuperlinearFamily.linear(1))


def diagram_erosion_distance(F_B: TypeBDiagram, G_B: TypeBDiagram):
    return diagram_erosion_report(F_B, G_B).distance


@dataclass(frozen=True)
class Barcode:
    bars: tuple

    def __post_init__(self):
        bars = []
        for b, d in self.bars:
            b = as_fraction(b)
            d = d if d == INF else as_fraction(d)
            if not b < d:
                raise ValueError(f"bar [{b}, {d}) is empty")
            bars.append((b, d))
        object.__setattr__(self, "bars", tuple(sorted(bars)))

    def __len__(self):
        return len(self.bars)


def barcode_from_ranks(F: ConstructibleModule) -> Barcode:
    """Interval multiplicities by inclusion-exclusion on the rank function."""
    cs = F.critical_values
    m = len(cs)
    r = F.rank
    bars = []
    for i in range(m):
        for j in range(i + 1, m):
            mult = r(i, j - 1) - r(i - 1, j - 1) - r(i, j) + r(i - 1, j)
            if mult < 0:
                raise ValueError(f"negative multiplicity {mult} for [{cs[i]}, {cs[j]})")
            bars += [(cs[i], cs[j])] * mult
        mult = r(i, m - 1) - r(i - 1, m - 1)
        if mult < 0:
            raise ValueError(f"negative multiplicity {mult} for [{cs[i]}, inf)")
        bars += [(cs[i], INF)] * mult
    return Barcode(tuple(bars))


def _pair_cost(x, y):
    (b1, d1), (b2, d2) = x, y
    if (d1 == INF) != (d2 == INF):
        return INF
    if d1 == INF:
        return abs(b1 - b2)
    return max(abs(b1 - b2), abs(d1 - d2))


def _diag_cost(x):
    b, d = x
    return INF if d == INF else (d - b) / 2


def _matchable(xs, ys, eps) -> bool:
    g = nx.Graph()
    left = [("x", i) for i in range(len(xs))] + [("dy", j) for j in range(len(ys))]
    right = [("y", j) for j in range(len(ys))] + [("dx", i) for i in range(len(xs))]
    g.add_nodes_from(left, bipartite=0)
    g.add_nodes_from(right, bipartite=1)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if _pair_cost(x, y) <= eps:
                g.add_edge(("x", i), ("y", j))
        if _diag_cost(x) <= eps:
            g.add_edge(("x", i), ("dx", i))
    for j, y in enumerate(ys):
        if _diag_cost(y) <= eps:
            g.add_edge(("dy", j), ("y", j))
        for i in range(len(xs)):
            g.add_edge(("dy", j), ("dx", i))
    if not left:
        return True
    matching = hopcroft_karp_matching(g, top_nodes=left)
    return all(v in matching for v in left)


def bottleneck(B1: Barcode, B2: Barcode):
    """Exact bottleneck distance; INF when the numbers of infinite bars differ."""
    xs, ys = list(B1.bars), list(B2.bars)
    if sum(d == INF for _, d in xs) != sum(d == INF for _, d in ys):
        return INF
    costs = {Fraction(0)}
    for x in xs:
        costs.add(_diag_cost(x))
        for y in ys:
            costs.add(_pair_cost(x, y))
    for y in ys:
        costs.add(_diag_cost(y))
    costs = sorted(c for c in costs if c != INF)
    lo, hi = 0, len(costs) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matchable(xs, ys, costs[mid]):
            hi = mid
        else:
            lo = mid + 1
    return costs[lo]


def interleaving_distance_1d(F: ConstructibleModule, G: ConstructibleModule):
    """Interleaving distance via the isometry with the bottleneck distance."""
    return bottleneck(barcode_from_ranks(F), barcode_from_ranks(G))
