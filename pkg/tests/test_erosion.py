import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from erodist.category import F2, F3, ZZ, VectObj
from erodist.erosion import (
    ErosionReport,
    brute_force_projection_distance,
    candidate_epsilons,
    dominates,
    erode_at,
    erosion_distance_family,
    erosion_distance_projection,
    erosion_distance_restricted,
)
from erodist.module import RankInvariant, direct_sum, interval_module
from erodist.oracles import enumerate_small_modules, naive_erosion_distance
from erodist.poset import (
    INF,
    DgmPoint,
    GridPoset,
    SublinearProjection,
    SuperlinearFamily,
    Translation,
    family_at,
    point,
)

LIN = SuperlinearFamily.linear(1)


def bars(intervals, axis, coeff=F2):
    grid = GridPoset.embedded([axis])
    parts = [interval_module(grid, coeff, (axis.index(b),), None if d is None else (axis.index(d),))
             for b, d in intervals]
    return RankInvariant(direct_sum(*parts) if len(parts) > 1 else parts[0])


AXIS = [0, 4, 6, 8, 10]
F010 = bars([(0, 10)], AXIS)
F08 = bars([(0, 8)], AXIS)
F46 = bars([(4, 6)], AXIS)


def shift(e, n=1):
    return Translation((Fraction(e),) * n)


def test_erode_at_examples():
    d = DgmPoint(point(3), point(7))
    assert erode_at(F010, shift(0), shift(0), d) == F010.evaluate(d.a, d.b)
    assert erode_at(F010, shift(2), shift(2), d) == VectObj(1)
    assert erode_at(F010, shift(2), shift(2), DgmPoint(point(1), point(9))) == VectObj(0)


def test_dominance_examples():
    assert dominates(F010, F010, shift(0), shift(0))
    assert dominates(F010, F08, shift(2), shift(2))
    res = dominates(F010, F08, shift(1), shift(1))
    assert not res
    a, b = res.witness
    # the witness really violates the inequality
    assert F010.evaluate((a[0] - 1,), (b[0] + 1,)) == VectObj(1)
    assert F08.evaluate(a, b) == VectObj(0)


def test_distance_examples():
    assert erosion_distance_family(F010, F010, LIN).distance == 0
    assert erosion_distance_family(F010, F08, LIN).distance == 2
    assert erosion_distance_family(F010, F46, LIN).distance == 4


def test_half_differences_are_needed():
    # [0, 10) against the zero module erodes away only at epsilon = 5
    zero = bars([(0, 0 + 4)], [0, 4, 10])
    grid = GridPoset.embedded([[0, 10]])
    empty = RankInvariant(interval_module(grid, F2, (0,), (0,)))
    rep = erosion_distance_family(bars([(0, 10)], [0, 10]), empty, LIN)
    assert rep.distance == 5 and rep.attained
    assert erosion_distance_family(zero, empty, LIN).distance == 2


def test_report_records_rejections():
    rep = erosion_distance_family(F010, F08, LIN)
    assert isinstance(rep, ErosionReport)
    assert rep.distance in rep.candidates
    assert all(eps < rep.distance for eps in rep.rejected)
    assert all(w is not None for w in rep.rejected.values())
    assert rep.witness_epsilon_grid == rep.candidates
    assert rep.failing_point == rep.rejected[max(rep.rejected)]
    assert erosion_distance_family(F010, F010, LIN).failing_point is None


def test_candidate_epsilons():
    f = bars([(0, 2)], [0, 1, 2])
    g = bars([(0, 2)], [0, 2])
    assert candidate_epsilons(f, g, LIN) == [0, Fraction(1, 2), 1, 2]
    one = bars([(0, None)], [0])
    assert candidate_epsilons(one, one, LIN) == [0]
    fl = SuperlinearFamily.floor_shift(1)
    assert candidate_epsilons(f, g, fl) == [0, 1, 2, 3]


def test_infinite_distance():
    f = bars([(0, None)], [0, 1])
    g = bars([(0, 1)], [0, 1])
    rep = erosion_distance_family(f, g, LIN)
    assert rep.distance == INF and not rep.is_finite


def test_mismatched_inputs_are_rejected():
    g2 = RankInvariant(enumerate_small_modules(0, (2, 2), F2))
    with pytest.raises(ValueError):
        erosion_distance_family(F010, g2, LIN)
    with pytest.raises(ValueError):
        dominates(F010, bars([(0, 10)], AXIS, ZZ), shift(0), shift(0))
    with pytest.raises(ValueError):
        erosion_distance_family(F010, F08, SuperlinearFamily.floor_shift(1))


def test_restricted_examples():
    assert erosion_distance_restricted(F010, F010, LIN).distance == 0
    assert erosion_distance_restricted(F010, F08, LIN).distance == 2


def test_projection_examples():
    w = SublinearProjection.max_shift()
    assert erosion_distance_projection(F010, F010, w, candidates=[(shift(0), shift(0))]).distance == 0
    pairs = [(shift(3), shift(1)), (shift(2), shift(2)), (shift(1), shift(1)), (shift(5), shift(5))]
    rep = erosion_distance_projection(F010, F08, w, candidates=pairs)
    assert rep.distance == 2 and rep.pair == (shift(2), shift(2))
    # cheaper pairs are tried first and rejected
    assert (shift(1), shift(1)) in rep.rejected
    assert (shift(3), shift(1)) not in rep.rejected


def pair(seed, shape, coeff, **kw):
    m1 = enumerate_small_modules(2 * seed, shape, coeff, vanish_at_top=True, **kw)
    m2 = enumerate_small_modules(2 * seed + 1, shape, coeff, vanish_at_top=True, **kw)
    return m1, m2


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.sampled_from([F2, F3, ZZ]))
def test_engine_agrees_with_dense_oracle_1d(seed, coeff):
    m1, m2 = pair(seed, (4,), coeff, max_coord=6)
    f, g = RankInvariant(m1), RankInvariant(m2)
    assert erosion_distance_family(f, g, LIN).distance == naive_erosion_distance(f, g, Fraction(1, 2))


@settings(max_examples=4)
@given(st.integers(0, 10**6), st.sampled_from([F2, ZZ]))
def test_engine_agrees_with_dense_oracle_2d_lattice(seed, coeff):
    m1, m2 = pair(seed, (3, 3), coeff, max_coord=3)
    f, g = RankInvariant(m1, lattice=True), RankInvariant(m2, lattice=True)
    fam = SuperlinearFamily.floor_shift(2)
    assert erosion_distance_family(f, g, fam).distance == naive_erosion_distance(f, g)


def test_engine_agrees_with_dense_oracle_2d_real():
    # the dense oracle is slow in two real parameters, so a single case
    coords = [[0, 1], [0, 2]]
    m1 = enumerate_small_modules(3, (2, 2), F2, coords=coords, vanish_at_top=True)
    m2 = enumerate_small_modules(8, (2, 2), F2, coords=coords, vanish_at_top=True)
    f, g = RankInvariant(m1), RankInvariant(m2)
    fam = SuperlinearFamily.linear(2)
    assert erosion_distance_family(f, g, fam).distance == naive_erosion_distance(f, g, Fraction(1, 2))


@given(st.integers(0, 10**6), st.sampled_from([(6,), (3, 3)]))
def test_dominance_is_monotone_in_epsilon(seed, shape):
    m1, m2 = pair(seed, shape, F2)
    f, g = RankInvariant(m1), RankInvariant(m2)
    fam = SuperlinearFamily.linear(len(shape))
    held = False
    for eps in candidate_epsilons(f, g, fam):
        t = family_at(fam, eps)
        now = bool(dominates(f, g, t, t))
        assert now or not held
        held = now


@given(st.integers(0, 10**6), st.sampled_from([F2, ZZ]))
def test_symmetry_and_identity(seed, coeff):
    m1, m2 = pair(seed, (5,), coeff)
    f, g = RankInvariant(m1), RankInvariant(m2)
    assert erosion_distance_family(f, f, LIN).distance == 0
    assert erosion_distance_family(f, g, LIN).distance == erosion_distance_family(g, f, LIN).distance


@given(st.integers(0, 10**6), st.sampled_from([(5,), (3, 3)]))
def test_restricted_equals_full(seed, shape):
    m1, m2 = pair(seed, shape, F2)
    f, g = RankInvariant(m1), RankInvariant(m2)
    fam = SuperlinearFamily.linear(len(shape))
    full = erosion_distance_family(f, g, fam).distance
    assert erosion_distance_restricted(f, g, fam).distance == full


@settings(max_examples=4)
@given(st.integers(0, 10**6))
def test_projection_matches_brute_force_on_anisotropic_2d(seed):
    rng = random.Random(seed)
    coords = [[0, 1, 2], [0, 3, 6]]
    m1 = enumerate_small_modules(rng.random(), (3, 3), F2, coords=coords, vanish_at_top=True)
    m2 = enumerate_small_modules(rng.random(), (3, 3), F2, coords=coords, vanish_at_top=True)
    f, g = RankInvariant(m1), RankInvariant(m2)
    levels = [0, 1, 2, 3]
    shifts = [Translation((Fraction(x), Fraction(y))) for x in levels for y in levels]
    cands = [(a, b) for a in shifts for b in shifts]
    w = SublinearProjection.max_shift()
    assert erosion_distance_projection(f, g, w, candidates=cands).distance == brute_force_projection_distance(f, g, w, cands)
