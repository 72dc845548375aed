"""Brute-force oracles and random test-case generators.

Nothing here shares logic with the optimized routines it checks: subquotients
are found on explicit element tables, and erosion distances by scanning
epsilon and sampling diagram points densely.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .algebra import IntMatrix, factorize
from .category import AbObj, Coefficients, F2, VectObj, presentation_of
from .module import PersistenceModule, module_from_generators
from .poset import INF, INTEGER_LATTICE, GridPoset, Translation, as_fraction, translate, translate_inverse

BRUTE_ORDER_CAP = 64


# finite abelian groups on element tables

def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups_up_to(n: int = BRUTE_ORDER_CAP) -> list[AbObj]:
    """Every finite abelian group of order <= n, once per isomorphism type."""
    out = []
    for order in range(1, n + 1):
        choices = [[[p ** e for e in part] for part in _partitions(k)] for p, k in factorize(order).items()]
        for pick in product(*choices):
            out.append(AbObj.from_cyclic(0, [q for qs in pick for q in qs]))
    return out


class _Group:
    """Z/d1 + ... + Z/dr with elements encoded as mixed-radix integers."""

    def __init__(self, moduli):
        self.moduli = tuple(moduli)
        self.order = math.prod(self.moduli)
        self.elements = list(product(*(range(d) for d in self.moduli)))
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._add = {}

    def add(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        r = self._add.get(key)
        if r is None:
            x, y = self.elements[i], self.elements[j]
            r = self.index[tuple((a + b) % d for a, b, d in zip(x, y, self.moduli))]
            self._add[key] = r
        return r

    def cyclic(self, g: int) -> frozenset:
        out, x = {0}, g
        while x != 0:
            out.add(x)
            x = self.add(x, g)
        return frozenset(out)

    def join(self, s: frozenset, g: int) -> frozenset:
        c = self.cyclic(g)
        return frozenset(self.add(a, b) for a in s for b in c)

    def subgroups(self) -> list[frozenset]:
        seen = {frozenset({0})}
        frontier = [frozenset({0})]
        while frontier:
            nxt = []
            for s in frontier:
                for g in range(self.order):
                    if g not in s:
                        t = self.join(s, g)
                        if t not in seen:
                            seen.add(t)
                            nxt.append(t)
            frontier = nxt
        return list(seen)

    def element_order(self, g: int, sub: frozenset = frozenset({0})) -> int:
        """Least k >= 1 with k g in ``sub``."""
        k, x = 1, g
        while x not in sub:
            x = self.add(x, g)
            k += 1
        return k

    def order_signature(self, elements, sub: frozenset = frozenset({0})) -> tuple:
        """Multiset of element orders; for cosets, pass a representative set."""
        return tuple(sorted(self.element_order(g, sub) for g in elements))

    def coset_representatives(self, sub: frozenset) -> list[int]:
        reps, covered = [], set()
        for g in range(self.order):
            if g not in covered:
                reps.append(g)
                covered.update(self.add(g, h) for h in sub)
        return reps


@lru_cache(maxsize=None)
def _signature_table() -> dict:
    """Finite abelian groups are determined by their multiset of element orders."""
    table = {}
    for a in abelian_groups_up_to(BRUTE_ORDER_CAP):
        g = _Group(a.invariant_factors or (1,))
        table[g.order_signature(range(g.order))] = a
    return table


@lru_cache(maxsize=None)
def _quotient_types(moduli: tuple) -> frozenset:
    g = _Group(moduli)
    table = _signature_table()
    out = set()
    for t in g.subgroups():
        out.add(table[g.order_signature(g.coset_representatives(t), t)])
    return frozenset(out)


@lru_cache(maxsize=None)
def _subquotient_types(moduli: tuple) -> frozenset:
    g = _Group(moduli)
    table = _signature_table()
    out = set()
    for s in {table[g.order_signature(s)] for s in g.subgroups()}:
        out |= _quotient_types(s.invariant_factors or (1,))
    return frozenset(out)


def brute_subquotient(A: AbObj, B: AbObj) -> bool:
    """Is A a quotient of a subgroup of B? Decided on explicit element tables."""
    if A.free_rank or B.free_rank:
        raise ValueError("brute force needs finite groups")
    if B.order > BRUTE_ORDER_CAP:
        raise ValueError(f"|B| = {B.order} exceeds the cap {BRUTE_ORDER_CAP}")
    if A.order > B.order:
        return False
    return A in _subquotient_types(B.invariant_factors or (1,))


# dense erosion oracle

def _samples(lo, hi, step):
    out, x = [], lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def _cached(inv, cache, a, b):
    v = cache.get((a, b))
    if v is None:
        v = cache[(a, b)] = inv.evaluate(a, b)
    return v


def _dense_dominates(f, g, gamma, kappa, pts, caches) -> bool:
    for a in pts:
        for b in pts:
            if a == b or any(x > y for x, y in zip(a, b)):
                continue
            lhs = _cached(f, caches[f], translate_inverse(gamma, a), translate(kappa, b))
            if not g.leq(lhs, _cached(g, caches[g], a, b)):
                return False
    return True


def naive_erosion_distance(f, g, resolution=Fraction(1, 2), eps_max=None, floor=None):
    """Least epsilon on the grid resolution * N passing both dominances, by dense sampling.

    Diagram points are sampled at spacing resolution / 2 (integers on a lattice
    domain) over every region where the invariants or their shifts can change.
    Breakpoints must lie on the resolution grid, so the samples hit every
    breakpoint and the midpoint of every cell between them.
    Returns INF when nothing up to ``eps_max`` passes.
    """
    resolution = as_fraction(resolution)
    floor = f.domain == INTEGER_LATTICE if floor is None else floor
    bps = [sorted(set(f.breakpoints(k)) | set(g.breakpoints(k))) for k in range(f.dim)]
    if eps_max is None:
        eps_max = max(b[-1] - b[0] for b in bps) + 1
    if floor:
        resolution = Fraction(1)
    caches = {f: {}, g: {}} if f is not g else {f: {}}
    eps = Fraction(0)
    while eps <= eps_max:
        pad = eps + 1
        if floor:
            axes = [_samples(Fraction(math.floor(b[0] - pad)), b[-1] + pad, Fraction(1)) for b in bps]
        else:
            axes = [_samples(b[0] - pad, b[-1] + pad, resolution / 2) for b in bps]
        pts = list(product(*axes))
        t = Translation((Fraction(math.floor(eps)) if floor else eps,) * f.dim)
        if _dense_dominates(f, g, t, t, pts, caches) and _dense_dominates(g, f, t, t, pts, caches):
            return eps
        eps += resolution
    return INF


# random generators

def _random_vector(rng: random.Random, support, n: int, coeff: Coefficients):
    v = [0] * n
    for i in support:
        if coeff.is_field:
            v[i] = rng.randrange(coeff.p)
        else:
            v[i] = rng.choice([1, -1, 2, 3, 0, 1])
    if not any(v) and support:
        v[rng.choice(list(support))] = 1
    return v


def enumerate_small_modules(seed, shape=(4,), coefficients: Coefficients = F2, max_gens: int = 3,
                            max_relations: int = 3, coords=None, max_coord: int | None = None,
                            vanish_at_top: bool = False) -> PersistenceModule:
    """A deterministic random module on a small grid.

    Generators are born at random grid points and relations are imposed later,
    so every structure map is induced by generator inclusion and all squares
    commute by construction. ``coords`` fixes the axis coordinates; otherwise
    they are distinct random integers below ``max_coord``. With
    ``vanish_at_top`` every generator is killed at the top corner, so all
    classes die and erosion distances between such modules are finite.
    """
    rng = random.Random(seed)
    if coords is None:
        axes = []
        for n in shape:
            top = max_coord if max_coord is not None else 2 * n + 2
            axes.append(sorted(rng.sample(range(top + 1), n)))
    else:
        axes = coords
    poset = GridPoset.embedded(axes)
    shape = poset.shape
    n_gens = rng.randint(1, max_gens)
    births = [tuple(rng.randrange(k) for k in shape) for _ in range(n_gens)]
    relations = []
    for _ in range(rng.randint(0, max_relations)):
        at = tuple(rng.randrange(k) for k in shape)
        alive = [i for i, b in enumerate(births) if all(x <= y for x, y in zip(b, at))]
        if not alive:
            continue
        relations.append((at, _random_vector(rng, rng.sample(alive, rng.randint(1, len(alive))), n_gens, coefficients)))
    if vanish_at_top:
        top = tuple(k - 1 for k in shape)
        relations += [(top, [int(i == j) for j in range(n_gens)]) for i in range(n_gens)]
    return module_from_generators(poset, coefficients, births, relations)


def random_ab_object(rng: random.Random, max_free: int = 2, max_torsion: int = 2, max_order: int = 12) -> AbObj:
    orders = [rng.randint(2, max_order) for _ in range(rng.randint(0, max_torsion))]
    return AbObj.from_cyclic(rng.randint(0, max_free), orders)


def random_ab_morphism(rng: random.Random, A: AbObj, B: AbObj, spread: int = 4) -> IntMatrix:
    """A random homomorphism between the canonical presentations of A and B."""
    pa, pb = presentation_of(A), presentation_of(B)
    a_orders = [0] * A.free_rank + list(A.invariant_factors)
    b_orders = [0] * B.free_rank + list(B.invariant_factors)
    rows = [[0] * pa.gens for _ in range(pb.gens)]
    for j, a in enumerate(a_orders):
        for i, b in enumerate(b_orders):
            if a == 0:
                rows[i][j] = rng.randint(-spread, spread)
            elif b != 0:
                # a * x must vanish in Z/b
                rows[i][j] = rng.randint(-spread, spread) * (b // math.gcd(a, b))
    return IntMatrix.from_rows(rows, pa.gens) if pb.gens else IntMatrix.zeros(0, pa.gens)


def random_vect_morphism(rng: random.Random, m: int, n: int, p: int = 2) -> IntMatrix:
    return IntMatrix(n, m, [rng.randrange(p) for _ in range(n * m)])


def random_vect_object(rng: random.Random, max_dim: int = 4, p: int = 2) -> VectObj:
    return VectObj(rng.randint(0, max_dim), p)
