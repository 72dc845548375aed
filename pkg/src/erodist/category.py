"""Objects of the preordered target categories and their image computations.

Three instances are modelled:

* ``VectObj``: finite-dimensional vector spaces over F_p (or Q), ordered by
  dimension.
* ``AbObj``: finitely generated abelian groups, ordered by "is a quotient of a
  subgroup of".
* ``SetObj``: finite sets, ordered by reverse inclusion.

Vect and Ab objects that carry morphism data are given by a
:class:`Presentation` (generators modulo a relation lattice); morphisms are
integer matrices on generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .algebra import (
    IntMatrix,
    NotNestedError,
    factorize,
    integer_kernel_basis,
    is_prime,
    lattice_quotient_invariants,
    rank_mod_p,
    solve_integer,
)


@dataclass(frozen=True)
class VectObj:
    dim: int
    p: int | None = 2

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __str__(self):
        field_ = f"F{self.p}" if self.p else "Q"
        return f"{field_}^{self.dim}"


@dataclass(frozen=True)
class AbObj:
    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(x) for x in self.invariant_factors)
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        if any(x < 2 for x in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invariant factors {fs} do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", fs)

    @classmethod
    def from_cyclic(cls, free_rank: int, orders) -> "AbObj":
        """Normalize an arbitrary list of cyclic orders into invariant factors."""
        return cls(free_rank, invariant_factors_from_orders(orders))

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def __str__(self):
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class SetObj:
    elements: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))

    def __str__(self):
        return "{" + ", ".join(sorted(map(str, self.elements))) + "}"


CatObject = Union[VectObj, AbObj, SetObj]


def invariant_factors_from_orders(orders) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        n = int(n)
        if n < 1:
            raise ValueError("cyclic orders must be positive")
        for p, e in factorize(n).items():
            by_prime.setdefault(p, []).append(p ** e)
    width = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * width
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            out[width - 1 - i] *= q
    return tuple(x for x in out if x > 1)


def _p_exponents(factors, p: int) -> list[int]:
    exps = []
    for d in factors:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            exps.append(e)
    return sorted(exps, reverse=True)


def _primes_of(factors) -> set[int]:
    out: set[int] = set()
    for d in factors:
        out.update(factorize(d))
    return out


def _quotient_of(a: AbObj, free: int, parts: dict[int, list[int]]) -> bool:
    """Is ``a`` a quotient of Z^free + (torsion with p-exponent partitions ``parts``)?"""
    if a.free_rank > free:
        return False
    spare = free - a.free_rank
    for p in _primes_of(a.invariant_factors):
        lam = _p_exponents(a.invariant_factors, p)
        mu = parts.get(p, [])
        for i, e in enumerate(lam):
            j = i - spare
            if j >= 0 and e > (mu[j] if j < len(mu) else 0):
                return False
    return True


def _ab_leq(a: AbObj, b: AbObj) -> bool:
    parts = {p: _p_exponents(b.invariant_factors, p) for p in _primes_of(b.invariant_factors)}
    return _quotient_of(a, b.free_rank, parts)


def _check_same_variant(a, b):
    if type(a) is not type(b):
        raise TypeError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    if isinstance(a, VectObj) and a.p != b.p:
        raise TypeError(f"coefficient mismatch: F{a.p} vs F{b.p}")


def preorder_leq(a: CatObject, b: CatObject) -> bool:
    _check_same_variant(a, b)
    if isinstance(a, VectObj):
        return a.dim <= b.dim
    if isinstance(a, SetObj):
        return a.elements >= b.elements
    return _ab_leq(a, b)


def _sub_partitions(mu: list[int]):
    """Partitions nu with nu_i <= mu_i (the subgroup types of a p-group of type mu)."""
    if not mu:
        yield []
        return
    for head in range(mu[0], -1, -1):
        for tail in _sub_partitions(mu[1:]):
            if head == 0 and any(tail):
                continue
            if tail and tail[0] > head:
                continue
            yield ([head] + tail) if head else []


def minimal_relation_R(a: CatObject, b: CatObject) -> bool:
    """``a R b``: some subobject b' of b surjects onto a.

    For Ab the subgroup b' is searched explicitly over the subgroup types of b.
    """
    _check_same_variant(a, b)
    if isinstance(a, SetObj):
        raise TypeError("the relation R is only instantiated for Vect and Ab")
    if isinstance(a, VectObj):
        return any(a.dim <= d for d in range(b.dim + 1))
    primes = sorted(_primes_of(b.invariant_factors))
    mus = [_p_exponents(b.invariant_factors, p) for p in primes]

    def subgroup_types(i):
        if i == len(primes):
            yield {}
            return
        for nu in _sub_partitions(mus[i]):
            for rest in subgroup_types(i + 1):
                yield {primes[i]: nu, **rest}

    for free in range(b.free_rank + 1):
        for parts in subgroup_types(0):
            if _quotient_of(a, free, parts):
                return True
    return False


@dataclass(frozen=True)
class Coefficients:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "field":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"field coefficients need a prime, got {self.p}")
        elif self.kind == "int":
            if self.p is not None:
                raise ValueError("integer coefficients take no prime")
        else:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def field(cls, p: int) -> "Coefficients":
        return cls("field", p)

    @classmethod
    def integers(cls) -> "Coefficients":
        return cls("int")

    @property
    def is_field(self) -> bool:
        return self.kind == "field"

    def zero_object(self) -> CatObject:
        return VectObj(0, self.p) if self.is_field else AbObj()

    def __str__(self):
        return f"F{self.p}" if self.is_field else "Z"


F2 = Coefficients.field(2)
F3 = Coefficients.field(3)
ZZ = Coefficients.integers()


@dataclass(frozen=True)
class Presentation:
    """``Z^gens / span(relations)`` (or the F_p analogue); relations is gens x r."""

    gens: int
    relations: IntMatrix
    coeff: Coefficients

    def __post_init__(self):
        if self.relations.rows != self.gens:
            raise ValueError(f"relation matrix has {self.relations.rows} rows for {self.gens} generators")
        if self.coeff.is_field:
            object.__setattr__(self, "relations", self.relations.mod(self.coeff.p))

    @classmethod
    def free(cls, gens: int, coeff: Coefficients) -> "Presentation":
        return cls(gens, IntMatrix.zeros(gens, 0), coeff)

    def to_object(self) -> CatObject:
        if self.coeff.is_field:
            return VectObj(self.gens - rank_mod_p(self.relations, self.coeff.p), self.coeff.p)
        return AbObj(*lattice_quotient_invariants(IntMatrix.identity(self.gens), self.relations))

    def is_canonical(self) -> bool:
        return self == presentation_of(self.to_object())


def presentation_of(obj: CatObject) -> Presentation:
    """The canonical presentation: free generators first, then one per invariant factor."""
    if isinstance(obj, VectObj):
        if obj.p is None:
            raise TypeError("rational vector spaces carry no presentation here")
        return Presentation.free(obj.dim, Coefficients.field(obj.p))
    if isinstance(obj, AbObj):
        n = obj.free_rank + len(obj.invariant_factors)
        rel = [[0] * len(obj.invariant_factors) for _ in range(n)]
        for j, d in enumerate(obj.invariant_factors):
            rel[obj.free_rank + j][j] = d
        return Presentation(n, IntMatrix.from_rows(rel, len(obj.invariant_factors)) if n else IntMatrix.zeros(0, 0), ZZ)
    raise TypeError("sets carry no presentation")


def _as_presentation(x) -> Presentation:
    return x if isinstance(x, Presentation) else presentation_of(x)


def _span_contains(p: Presentation, vectors: IntMatrix) -> bool:
    if p.coeff.is_field:
        q = p.coeff.p
        return rank_mod_p(p.relations.hstack(vectors), q) == rank_mod_p(p.relations, q)
    try:
        solve_integer(p.relations, vectors)
    except NotNestedError:
        return False
    return True


def is_morphism(f: IntMatrix, a, b) -> bool:
    """Does ``f`` carry the relations of ``a`` into those of ``b``?"""
    a, b = _as_presentation(a), _as_presentation(b)
    if f.shape != (b.gens, a.gens):
        return False
    return _span_contains(b, f @ a.relations)


def morphisms_equal(f: IntMatrix, g: IntMatrix, target) -> bool:
    """Equality of two morphisms into ``target`` modulo its relations."""
    target = _as_presentation(target)
    if f.shape != g.shape:
        return False
    return _span_contains(target, f - g)


def image_object(f: IntMatrix, a, b) -> CatObject:
    """Isomorphism type of the image of ``f: a -> b`` (Vect or Ab)."""
    if isinstance(a, SetObj) or isinstance(b, SetObj):
        raise TypeError("Set objects carry no morphism data")
    a, b = _as_presentation(a), _as_presentation(b)
    if f.shape != (b.gens, a.gens):
        raise ValueError(f"morphism of shape {f.shape} does not fit {a.gens} -> {b.gens} generators")
    if a.coeff != b.coeff:
        raise TypeError("coefficient mismatch")
    span = f.hstack(b.relations)
    if b.coeff.is_field:
        p = b.coeff.p
        return VectObj(rank_mod_p(span, p) - rank_mod_p(b.relations, p), p)
    return AbObj(*lattice_quotient_invariants(span, b.relations))


def cokernel_object(f: IntMatrix, a, b) -> CatObject:
    a, b = _as_presentation(a), _as_presentation(b)
    if b.coeff.is_field:
        p = b.coeff.p
        return VectObj(b.gens - rank_mod_p(b.relations.hstack(f), p), p)
    return AbObj(*lattice_quotient_invariants(IntMatrix.identity(b.gens), b.relations.hstack(f)))


def kernel_object(f: IntMatrix, a, b) -> CatObject:
    a, b = _as_presentation(a), _as_presentation(b)
    if b.coeff.is_field:
        p = b.coeff.p
        dim_a = a.gens - rank_mod_p(a.relations, p)
        img = rank_mod_p(f.hstack(b.relations), p) - rank_mod_p(b.relations, p)
        return VectObj(dim_a - img, p)
    # x with f x in span(R_b), taken modulo R_a
    joint = f.hstack(b.relations.scale(-1))
    k = integer_kernel_basis(joint)
    lifts = k.select_rows(list(range(a.gens)))
    return AbObj(*lattice_quotient_invariants(lifts, a.relations))
