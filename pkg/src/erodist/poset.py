"""Grid posets, shift translations, superlinear families and sublinear projections.

Points are plain tuples of :class:`fractions.Fraction`. Translations on the
grids used here are non-negative shift vectors, so inverses stay exact.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

INF = math.inf

INTEGER_LATTICE = "integer"
EMBEDDED_GRID = "embedded"


class _Bottom:
    """Sentinel for points strictly below an embedded grid (zero object)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an exact rational or a 'p/q' string")
    return Fraction(x)


def point(*coords) -> tuple[Fraction, ...]:
    """Build a poset point; ``point(1, "1/2")`` or ``point([1, 2])``."""
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = coords[0]
    return tuple(as_fraction(c) for c in coords)


def _check_dims(p: Sequence, q: Sequence) -> None:
    if len(p) != len(q):
        raise ValueError(f"dimension mismatch: {len(p)} vs {len(q)}")


def leq_points(p: Sequence, q: Sequence) -> bool:
    _check_dims(p, q)
    return all(x <= y for x, y in zip(p, q))


def lt_points(p: Sequence, q: Sequence) -> bool:
    """The strict order of the diagram domain: ``p <= q`` and ``p != q``."""
    return leq_points(p, q) and tuple(p) != tuple(q)


@dataclass(frozen=True)
class GridPoset:
    dim: int
    kind: str = EMBEDDED_GRID
    axes: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind == INTEGER_LATTICE:
            if self.axes is not None:
                raise ValueError("the integer lattice carries no axes")
            return
        if self.kind != EMBEDDED_GRID:
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.axes is None or len(self.axes) != self.dim:
            raise ValueError("an embedded grid needs one axis per dimension")
        axes = tuple(tuple(as_fraction(c) for c in ax) for ax in self.axes)
        for ax in axes:
            if not ax:
                raise ValueError("grid axes must be non-empty")
            if any(b <= a for a, b in zip(ax, ax[1:])):
                raise ValueError(f"grid axis {ax} is not strictly increasing")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def embedded(cls, axes: Iterable[Iterable]) -> "GridPoset":
        axes = tuple(tuple(as_fraction(c) for c in ax) for ax in axes)
        return cls(len(axes), EMBEDDED_GRID, axes)

    @classmethod
    def lattice(cls, dim: int) -> "GridPoset":
        return cls(dim, INTEGER_LATTICE)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    def coords(self, index: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(ax[i] for ax, i in zip(self.axes, index))

    def indices(self):
        """All grid indices in lexicographic order."""
        from itertools import product

        return product(*(range(n) for n in self.shape))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for ax in self.axes for c in ax)

    def axis_step(self, axis: int, x) -> int:
        """Largest index whose coordinate is <= x; -1 below the axis."""
        return bisect_right(self.axes[axis], x) - 1

    def step_lookup(self, x: Sequence):
        """Snap an arbitrary point to the grid, saturating above the maximum.

        Returns a tuple of indices, or BOTTOM if some coordinate lies below
        that axis' minimum.
        """
        if len(x) != self.dim:
            raise ValueError(f"dimension mismatch: {len(x)} vs {self.dim}")
        idx = tuple(self.axis_step(k, c) for k, c in enumerate(x))
        if any(i < 0 for i in idx):
            return BOTTOM
        return idx


class DgmPoint(NamedTuple):
    a: tuple
    b: tuple

    def is_valid(self, restricted: bool = False) -> bool:
        if restricted:
            return len(self.a) == len(self.b) and all(x < y for x, y in zip(self.a, self.b))
        return lt_points(self.a, self.b)


def dgm_point(a, b, restricted: bool = False) -> DgmPoint:
    d = DgmPoint(point(a), point(b))
    if not d.is_valid(restricted):
        raise ValueError(f"({d.a}, {d.b}) is not in the diagram domain")
    return d


def dgm_leq(d: DgmPoint, e: DgmPoint) -> bool:
    """(a, b) <= (a', b') iff a >= a' and b <= b'."""
    return leq_points(e.a, d.a) and leq_points(d.b, e.b)


@dataclass(frozen=True)
class Translation:
    shift: tuple[Fraction, ...]

    def __post_init__(self):
        s = tuple(as_fraction(c) for c in self.shift)
        if any(c < 0 for c in s):
            raise ValueError(f"translation shift must be non-negative, got {s}")
        object.__setattr__(self, "shift", s)

    @classmethod
    def identity(cls, dim: int) -> "Translation":
        return cls((Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.shift)

    def __le__(self, other: "Translation") -> bool:
        return leq_points(self.shift, other.shift)

    def __matmul__(self, other: "Translation") -> "Translation":
        return compose_translations(self, other)


def translate(t: Translation, p: Sequence) -> tuple:
    _check_dims(t.shift, p)
    return tuple(x + s for x, s in zip(p, t.shift))


def translate_inverse(t: Translation, p: Sequence) -> tuple:
    _check_dims(t.shift, p)
    return tuple(x - s for x, s in zip(p, t.shift))


def compose_translations(g: Translation, k: Translation) -> Translation:
    _check_dims(g.shift, k.shift)
    return Translation(tuple(x + y for x, y in zip(g.shift, k.shift)))


LINEAR = "linear"
FLOOR = "floor"


@dataclass(frozen=True)
class SuperlinearFamily:
    """``Linear`` shifts by (eps, ..., eps); ``FloorShift`` by floor(eps) on Z^n."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (LINEAR, FLOOR):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    @classmethod
    def linear(cls, dim: int) -> "SuperlinearFamily":
        return cls(LINEAR, dim)

    @classmethod
    def floor_shift(cls, dim: int) -> "SuperlinearFamily":
        return cls(FLOOR, dim)

    @property
    def domain(self) -> str:
        return INTEGER_LATTICE if self.kind == FLOOR else EMBEDDED_GRID


def family_at(fam: SuperlinearFamily, eps) -> Translation:
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError(f"epsilon must be non-negative, got {eps}")
    step = Fraction(math.floor(eps)) if fam.kind == FLOOR else eps
    return Translation((step,) * fam.dim)


MAX_SHIFT = "max"
ADJOINT = "adjoint"


@dataclass(frozen=True)
class SublinearProjection:
    kind: str
    family: SuperlinearFamily | None = None
    scale: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.kind not in (MAX_SHIFT, ADJOINT):
            raise ValueError(f"unknown projection kind {self.kind!r}")
        if self.kind == ADJOINT and self.family is None:
            raise ValueError("an adjoint projection needs its family")
        scale = as_fraction(self.scale)
        if scale <= 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "scale", scale)

    @classmethod
    def max_shift(cls, scale=1) -> "SublinearProjection":
        return cls(MAX_SHIFT, None, scale)


def projection_value(proj: SublinearProjection, t: Translation):
    top = max(t.shift, default=Fraction(0))
    if proj.kind == MAX_SHIFT:
        return proj.scale * top
    # min{eps : t <= family_at(eps)}; both supported families attain it
    if proj.family.kind == LINEAR:
        return proj.scale * top
    return proj.scale * Fraction(math.ceil(top))


def derive_adjoint_projection(fam: SuperlinearFamily) -> SublinearProjection:
    return SublinearProjection(ADJOINT, fam)


def check_adjunction(proj: SublinearProjection, fam: SuperlinearFamily, samples) -> bool:
    """True iff ``proj(t) <= eps  <=>  t <= fam(eps)`` for every (t, eps) sample."""
    return not adjunction_violations(proj, fam, samples)


def adjunction_violations(proj, fam, samples) -> list:
    bad = []
    for t, eps in samples:
        eps = as_fraction(eps)
        if (projection_value(proj, t) <= eps) != (t <= family_at(fam, eps)):
            bad.append((t, eps))
    return bad
