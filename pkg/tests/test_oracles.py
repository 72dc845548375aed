from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from erodist.category import F2, F3, ZZ, AbObj, preorder_leq
from erodist.module import RankInvariant, interval_module, validate_functoriality
from erodist.oracles import (
    abelian_groups_up_to,
    brute_subquotient,
    enumerate_small_modules,
    naive_erosion_distance,
)
from erodist.poset import GridPoset

Z2, Z4 = AbObj(0, (2,)), AbObj(0, (4,))
V4 = AbObj(0, (2, 2))


def bar(axis, b, d):
    grid = GridPoset.embedded([axis])
    return RankInvariant(interval_module(grid, F2, (axis.index(b),), (axis.index(d),)))


def test_group_listing():
    counts = [sum(1 for a in abelian_groups_up_to(8) if a.order == n) for n in range(1, 9)]
    assert counts == [1, 1, 1, 2, 1, 1, 1, 3]
    groups = abelian_groups_up_to(64)
    assert len(groups) == len(set(groups))
    assert sum(1 for a in groups if a.order == 64) == 11


def test_brute_subquotient_examples():
    assert brute_subquotient(Z2, Z4)
    assert not brute_subquotient(Z4, V4)
    assert brute_subquotient(V4, V4)
    assert brute_subquotient(AbObj(0, ()), Z2)
    # Z/2 + Z/2 is not a subquotient of a cyclic group
    assert not brute_subquotient(V4, AbObj(0, (8,)))
    with pytest.raises(ValueError):
        brute_subquotient(Z2, AbObj(0, (128,)))
    with pytest.raises(ValueError):
        brute_subquotient(Z2, AbObj(1, ()))


def test_brute_force_agrees_on_small_orders():
    groups = abelian_groups_up_to(16)
    for a in groups:
        for b in groups:
            assert brute_subquotient(a, b) == preorder_leq(a, b)


def test_naive_distance_examples():
    axis = [0, 4, 6, 8, 10]
    f010, f08, f46 = bar(axis, 0, 10), bar(axis, 0, 8), bar(axis, 4, 6)
    assert naive_erosion_distance(f010, f010) == 0
    assert naive_erosion_distance(f010, f08) == 2
    assert naive_erosion_distance(f010, f46) == 4
    # a bar of length 1 erodes away at 1/2
    assert naive_erosion_distance(bar([0, 1], 0, 1), bar([0, 1], 0, 0)) == Fraction(1, 2)
    assert naive_erosion_distance(bar([0, 1], 0, 1), bar([0, 2], 0, 2)) == 1


@given(st.integers(0, 10**6), st.sampled_from([(4,), (2, 3), (3, 3)]), st.sampled_from([F2, F3, ZZ]))
def test_generated_modules_are_deterministic_and_valid(seed, shape, coeff):
    m = enumerate_small_modules(seed, shape, coeff)
    again = enumerate_small_modules(seed, shape, coeff)
    assert m.objects == again.objects and m.edges == again.edges
    assert m.poset.shape == shape
    assert validate_functoriality(m) is None
    assert all(len(set(ax)) == len(ax) for ax in m.poset.axes)


@given(st.integers(0, 10**6), st.sampled_from([(3,), (2, 2)]))
def test_vanish_at_top_kills_everything(seed, shape):
    m = enumerate_small_modules(seed, shape, F2, vanish_at_top=True)
    top = tuple(k - 1 for k in shape)
    assert m.object_at(top).dim == 0
