"""Erosion of diagram-indexed maps and the erosion distances.

Invariants are step functions on each axis: their value at (a, b) depends only
on per-axis keys ``key(k, a_k)``, ``key(k, b_k)``, which are monotone in the
coordinate. A dominance check ``f(a - s, b + t) <= g(a, b)`` over the whole
diagram domain therefore reduces to finitely many key combinations, found by
sampling every cell of the common refinement of the breakpoints of g and the
shifted breakpoints of f.

Both dominance predicates are monotone in epsilon for decreasing maps, so a
binary search over the candidate thresholds (and the open gaps between them)
recovers the exact infimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from .poset import (
    FLOOR,
    INF,
    INTEGER_LATTICE,
    LINEAR,
    DgmPoint,
    SublinearProjection,
    SuperlinearFamily,
    Translation,
    family_at,
    projection_value,
    translate,
    translate_inverse,
)


class Dominance(NamedTuple):
    holds: bool
    witness: DgmPoint | None = None

    def __bool__(self):
        return self.holds


@dataclass
class ErosionReport:
    distance: Fraction | float
    candidates: list
    rejected: dict = field(default_factory=dict)
    attained: bool = True
    pair: tuple | None = None

    @property
    def is_finite(self) -> bool:
        return self.distance != INF

    @property
    def witness_epsilon_grid(self) -> list:
        """Every threshold examined, passing or not."""
        return self.candidates

    @property
    def failing_point(self):
        """Witness against the largest rejected threshold, if any was rejected."""
        if not self.rejected:
            return None
        return self.rejected[max(self.rejected, key=_rejection_order)]


def _rejection_order(key):
    if isinstance(key, tuple):
        return tuple(max(t.shift) for t in key)
    return key


def _check_compatible(f, g) -> None:
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if f.domain != g.domain:
        raise ValueError(f"domain mismatch: {f.domain} vs {g.domain}")
    lf, lg = f.least, g.least
    if type(lf) is not type(lg) or getattr(lf, "p", None) != getattr(lg, "p", None):
        raise ValueError("invariants take values in different categories")


def _check_family(f, fam: SuperlinearFamily) -> None:
    if fam.dim != f.dim:
        raise ValueError("family dimension does not match the invariants")
    if fam.domain != f.domain:
        raise ValueError(f"a {fam.kind} family needs a {fam.domain} domain, the invariants live on {f.domain}")


def erode_at(f, gamma: Translation, kappa: Translation, d: DgmPoint):
    """f(gamma^-1 a, kappa b); the least object when that leaves the diagram domain."""
    a, b = translate_inverse(gamma, d.a), translate(kappa, d.b)
    if not DgmPoint(a, b).is_valid():
        return f.least
    return f.evaluate(a, b)


def _cell_reps(points, domain: str) -> list[Fraction]:
    pts = sorted(set(points))
    if domain == INTEGER_LATTICE:
        if not pts:
            return [Fraction(0), Fraction(1)]
        lo, hi = math.floor(pts[0]) - 2, math.ceil(pts[-1]) + 2
        return [Fraction(i) for i in range(lo, hi + 1)]
    if not pts:
        return [Fraction(0), Fraction(1)]
    # two interior samples per open cell so equal cells still admit a < b
    reps = [pts[0] - 2, pts[0] - 1]
    for x, y in zip(pts, pts[1:]):
        w = (y - x) / 3
        reps += [x, x + w, x + 2 * w]
    reps += [pts[-1], pts[-1] + 1, pts[-1] + 2]
    return reps


def _runs(keys):
    out = []
    start = 0
    for i in range(1, len(keys) + 1):
        if i == len(keys) or keys[i] != keys[start]:
            out.append((keys[start], start, i - 1))
            start = i
    return out


def _pareto(cases: dict) -> dict:
    """Drop key combinations that cannot fail unless a kept one fails too.

    (fa, fb, ga, gb) is implied by another combination whose f-interval sits
    inside it and whose g-interval contains it (values are monotone in keys).
    """
    items = list(cases.items())
    keep = {}
    for i, (x, (sx, *_)) in enumerate(items):
        dominated = False
        for j, (y, (sy, *_)) in enumerate(items):
            if i == j or (sx and not sy):
                continue
            if y[0] >= x[0] and y[1] <= x[1] and y[2] <= x[2] and y[3] >= x[3] and (y != x):
                dominated = True
                break
        if not dominated:
            keep[x] = cases[x]
    return keep


def _axis_cases(f, g, k: int, lower: Fraction, upper: Fraction, prune: bool):
    fbp = f.breakpoints(k)
    pts = list(g.breakpoints(k)) + [c + lower for c in fbp] + [c - upper for c in fbp]
    reps = _cell_reps(pts, f.domain)
    a_runs = _runs([(f.key(k, x - lower), g.key(k, x)) for x in reps])
    b_runs = _runs([(f.key(k, x + upper), g.key(k, x)) for x in reps])
    cases: dict = {}
    for (fa, ga), a0, _ in a_runs:
        for (fb, gb), _, b1 in b_runs:
            if a0 > b1:
                continue
            strict = a0 < b1
            key = (fa, fb, ga, gb)
            prev = cases.get(key)
            if prev is None or (strict and not prev[0]):
                cases[key] = (strict, reps[a0], reps[b1])
    if prune:
        cases = _pareto(cases)
    return [(key, *val) for key, val in cases.items()]


def dominates(f, g, gamma: Translation, kappa: Translation, restricted: bool = False) -> Dominance:
    """Decide ``f(gamma^-1 a, kappa b) <= g(a, b)`` for every (a, b) in the diagram domain.

    With ``restricted=True`` only points with a_i < b_i on every axis count.
    """
    _check_compatible(f, g)
    if gamma.dim != f.dim or kappa.dim != f.dim:
        raise ValueError("translation dimension does not match the invariants")
    # pruning only pays off when axes are combined
    prune = f.dim > 1 and getattr(f, "monotone", True) and getattr(g, "monotone", True)
    axes = [_axis_cases(f, g, k, gamma.shift[k], kappa.shift[k], prune) for k in range(f.dim)]
    leq = g.leq
    for combo in product(*axes):
        stricts = [c[1] for c in combo]
        if restricted:
            if not all(stricts):
                continue
        elif not any(stricts):
            continue
        fa = tuple(c[0][0] for c in combo)
        fb = tuple(c[0][1] for c in combo)
        ga = tuple(c[0][2] for c in combo)
        gb = tuple(c[0][3] for c in combo)
        if not leq(f.value(fa, fb), g.value(ga, gb)):
            return Dominance(False, DgmPoint(tuple(c[2] for c in combo), tuple(c[3] for c in combo)))
    return Dominance(True)


def _both(f, g, gamma, kappa, restricted):
    d = dominates(f, g, gamma, kappa, restricted)
    if not d:
        return d
    return dominates(g, f, kappa, gamma, restricted)


def candidate_epsilons(f, g, fam: SuperlinearFamily | None = None) -> list[Fraction]:
    """Thresholds where the combinatorics of an erosion check can change.

    For the linear family these are coordinate differences on a common axis and
    their halves (shifting a's breakpoints up and b's down meet in the middle).
    For the floor family every integer up to one past the grid diameter.
    """
    kind = fam.kind if fam is not None else (FLOOR if f.domain == INTEGER_LATTICE else LINEAR)
    if kind == FLOOR:
        span = 0
        for k in range(f.dim):
            cs = list(f.breakpoints(k)) + list(g.breakpoints(k))
            span = max(span, max(cs) - min(cs))
        return [Fraction(i) for i in range(int(math.ceil(span)) + 2)]
    out = {Fraction(0)}
    for k in range(f.dim):
        cs = sorted(set(f.breakpoints(k)) | set(g.breakpoints(k)))
        for i, x in enumerate(cs):
            for y in cs[i + 1:]:
                out.add(y - x)
                out.add((y - x) / 2)
    return sorted(out)


def _search_sequence(cands: list[Fraction], kind: str) -> list[tuple[Fraction, int]]:
    """Candidates interleaved with one sample per open gap (and one past the end).

    Each entry is (epsilon, index of the candidate whose open right-gap it samples
    or -1 for the candidates themselves).
    """
    if kind == FLOOR:
        return [(c, -1) for c in cands]
    seq = []
    for i, c in enumerate(cands):
        seq.append((c, -1))
        nxt = cands[i + 1] if i + 1 < len(cands) else c + 2
        seq.append(((c + nxt) / 2, i))
    return seq


def _first_passing(seq, pred, rejected):
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        eps = seq[mid][0]
        res = pred(eps)
        if res:
            hi = mid
        else:
            rejected[eps] = res.witness
            lo = mid + 1
    return lo


def erosion_distance_family(f, g, fam: SuperlinearFamily, restricted: bool = False) -> ErosionReport:
    """inf{eps : both eps-erosions are dominated}, exactly, as an ErosionReport."""
    _check_compatible(f, g)
    _check_family(f, fam)
    cands = candidate_epsilons(f, g, fam)
    rejected: dict = {}

    def pred(eps):
        t = family_at(fam, eps)
        return _both(f, g, t, t, restricted)

    if pred(Fraction(0)):
        return ErosionReport(Fraction(0), cands, rejected)
    seq = _search_sequence(cands, fam.kind)
    idx = _first_passing(seq, pred, rejected)
    if idx == len(seq):
        return ErosionReport(INF, cands, rejected, attained=False)
    eps, gap = seq[idx]
    if gap < 0:
        return ErosionReport(eps, cands, rejected)
    return ErosionReport(cands[gap], cands, rejected, attained=False)


def erosion_distance_restricted(f, g, fam: SuperlinearFamily) -> ErosionReport:
    """Same infimum with both dominances checked on a_i < b_i points only."""
    return erosion_distance_family(f, g, fam, restricted=True)


def default_shift_levels(f, g, proj: SublinearProjection) -> tuple[list, list, list]:
    """Component values for default candidate translations, their gap markers and the thresholds."""
    fam_kind = FLOOR if f.domain == INTEGER_LATTICE else LINEAR
    cands = candidate_epsilons(f, g, SuperlinearFamily(fam_kind, f.dim))
    seq = _search_sequence(cands, fam_kind)
    return [e for e, _ in seq], [gap for _, gap in seq], cands


def erosion_distance_projection(f, g, proj: SublinearProjection, candidates=None,
                                restricted: bool = False) -> ErosionReport:
    """inf over eps of: some (gamma, kappa) with proj values <= eps passes both dominances.

    ``candidates`` is an explicit list of (gamma, kappa) pairs. By default all
    pairs of shift vectors whose components are candidate thresholds (or a
    sample of the open gap after one) are searched, cheapest first. That set
    grows like levels^(2 * dim); keep it to small grids.
    """
    _check_compatible(f, g)
    rejected: dict = {}
    if candidates is not None:
        scored = sorted(((max(projection_value(proj, a), projection_value(proj, b)), a, b) for a, b in candidates),
                        key=lambda t: t[0])
        for cost, a, b in scored:
            res = _both(f, g, a, b, restricted)
            if res:
                return ErosionReport(cost, [c for c, _, _ in scored], rejected, pair=(a, b))
            rejected[(a, b)] = res.witness
        return ErosionReport(INF, [c for c, _, _ in scored], rejected, attained=False)

    levels, gaps, cands = default_shift_levels(f, g, proj)
    n = f.dim
    for i, level in enumerate(levels):
        # every pair on this level is dominated by the symmetric one
        top = Translation((level,) * n)
        res = _both(f, g, top, top, restricted)
        if not res:
            rejected[(top, top)] = res.witness
            continue
        for combo in product(range(i + 1), repeat=2 * n):
            if i not in combo:
                continue
            a = Translation(tuple(levels[j] for j in combo[:n]))
            b = Translation(tuple(levels[j] for j in combo[n:]))
            res = _both(f, g, a, b, restricted)
            if not res:
                rejected[(a, b)] = res.witness
                continue
            cost = max(projection_value(proj, a), projection_value(proj, b))
            if gaps[i] < 0:
                return ErosionReport(cost, cands, rejected, pair=(a, b))
            # an open gap passes: the infimum is the projection of the left end
            left = Translation((cands[gaps[i]],) * n)
            return ErosionReport(projection_value(proj, left), cands, rejected, attained=False, pair=(a, b))
    return ErosionReport(INF, cands, rejected, attained=False)


def brute_force_projection_distance(f, g, proj: SublinearProjection, candidates) -> Fraction | float:
    """Minimum cost over every passing candidate pair, without ordering or early exit."""
    best = INF
    for a, b in candidates:
        if _both(f, g, a, b, False):
            best = min(best, max(projection_value(proj, a), projection_value(proj, b)))
    return best


__all__ = [
    "Dominance",
    "ErosionReport",
    "brute_force_projection_distance",
    "candidate_epsilons",
    "default_shift_levels",
    "dominates",
    "erode_at",
    "erosion_distance_family",
    "erosion_distance_projection",
    "erosion_distance_restricted",
]
