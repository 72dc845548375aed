import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from erodist.algebra import IntMatrix
from erodist.category import F2, F3, ZZ, AbObj, Presentation, VectObj, image_object, morphisms_equal, preorder_leq
from erodist.module import (
    ModuleValidationError,
    PersistenceModule,
    RankInvariant,
    direct_sum,
    interval_module,
    rank_invariant_at,
    transition_map,
    validate_functoriality,
)
from erodist.oracles import enumerate_small_modules
from erodist.poset import BOTTOM, DgmPoint, GridPoset, point


def example_module():
    grid = GridPoset.embedded([[0, 1, 2]])
    objects = {(0,): Presentation.free(1, F2), (1,): Presentation.free(2, F2), (2,): Presentation.free(1, F2)}
    edges = {((0,), 0): IntMatrix.from_rows([[1], [0]]), ((1,), 0): IntMatrix.from_rows([[0, 1]])}
    return PersistenceModule(grid, F2, objects, edges)


def square(entry):
    grid = GridPoset.embedded([[0, 1], [0, 1]])
    objs = {idx: Presentation.free(1, F2) for idx in grid.indices()}
    one = IntMatrix.from_rows([[1]])
    edges = {((0, 0), 0): one, ((0, 0), 1): one, ((1, 0), 1): one, ((0, 1), 0): IntMatrix.from_rows([[entry]])}
    return PersistenceModule(grid, F2, objs, edges, validate=False)


def test_rank_invariant_examples():
    m = example_module()
    assert rank_invariant_at(m, DgmPoint(point(0), point(2))) == VectObj(0)
    assert rank_invariant_at(m, DgmPoint(point(0), point(1))) == VectObj(1)
    assert rank_invariant_at(m, DgmPoint(point(-1), point(1))) == VectObj(0)


def test_step_lookup_on_module():
    m = example_module()
    assert m.step_lookup(["3/2"]) == (1,)
    assert m.step_lookup([-1]) is BOTTOM
    assert m.step_lookup([99]) == (2,)


def test_transition_maps():
    m = example_module()
    assert transition_map(m, [1], [1]) == IntMatrix.identity(2)
    assert transition_map(m, [0], [1]) == IntMatrix.from_rows([[1], [0]])
    assert transition_map(m, [0], [2]) == IntMatrix.from_rows([[0]])
    with pytest.raises(ValueError):
        transition_map(m, [2], [0])


def test_functoriality_check():
    assert validate_functoriality(example_module()) is None
    assert validate_functoriality(square(1)) is None
    bad = validate_functoriality(square(0))
    assert bad is not None and bad.corner == (0, 0)
    with pytest.raises(ModuleValidationError):
        PersistenceModule(square(0).poset, F2, square(0).objects, square(0).edges)


def test_two_edge_path_is_a_product():
    grid = GridPoset.embedded([[0, 1], [0, 1]])
    objs = {idx: Presentation.free(1, F3) for idx in grid.indices()}
    two, one = IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[1]])
    edges = {((0, 0), 0): two, ((0, 1), 0): two, ((0, 0), 1): one, ((1, 0), 1): one}
    m = PersistenceModule(grid, F3, objs, edges)
    assert transition_map(m, [0, 0], [1, 1]) == two


def test_edges_must_respect_relations():
    grid = GridPoset.embedded([[0, 1]])
    z2 = Presentation(1, IntMatrix.from_rows([[2]]), ZZ)
    z = Presentation.free(1, ZZ)
    with pytest.raises(ModuleValidationError):
        PersistenceModule(grid, ZZ, {(0,): z2, (1,): z}, {((0,), 0): IntMatrix.from_rows([[1]])})


def test_interval_and_torsion_rectangles():
    grid = GridPoset.embedded([[0, 10]])
    f = RankInvariant(interval_module(grid, F2, (0,), (1,)))
    assert f.evaluate(point(1), point(9)) == VectObj(1)
    assert f.evaluate(point(-1), point(11)) == VectObj(0)
    t = RankInvariant(interval_module(GridPoset.embedded([[0, 1], [0, 1]]), ZZ, (0, 0), order=2))
    assert t.evaluate(point(0, 0), point(5, 5)) == AbObj(0, (2,))


def test_direct_sum_adds_ranks():
    grid = GridPoset.embedded([[0, 1, 2]])
    m = direct_sum(interval_module(grid, F2, (0,), (2,)), interval_module(grid, F2, (1,)))
    f = RankInvariant(m)
    assert f.evaluate(point(1), point("3/2")) == VectObj(2)
    assert f.evaluate(point(1), point(2)) == VectObj(1)


def test_lattice_invariant_requires_integer_points():
    grid = GridPoset.embedded([[0, 2]])
    f = RankInvariant(interval_module(grid, F2, (0,)), lattice=True)
    assert f.evaluate(point(0), point(3)) == VectObj(1)
    with pytest.raises(ValueError):
        f.evaluate(point("1/2"), point(3))
    with pytest.raises(ValueError):
        RankInvariant(interval_module(GridPoset.embedded([["1/2", 2]]), F2, (0,)), lattice=True)


@given(st.integers(0, 10**6), st.sampled_from([F2, F3, ZZ]), st.sampled_from([(5,), (3, 3), (2, 2, 2)]))
def test_generated_modules_are_functorial_and_path_independent(seed, coeff, shape):
    m = enumerate_small_modules(seed, shape, coeff)
    assert validate_functoriality(m) is None
    top = tuple(n - 1 for n in m.poset.shape)
    start = tuple(0 for _ in shape)
    maps = list(m.path_maps(start, top))
    ref = m.transition_map_idx(start, top)
    assert all(morphisms_equal(p, ref, m.objects[top]) for p in maps)


def test_generated_modules_are_deterministic():
    a, b = enumerate_small_modules(7, (3, 3), ZZ), enumerate_small_modules(7, (3, 3), ZZ)
    assert a.objects == b.objects and a.edges == b.edges


def _random_comparable_pair(rng, m):
    """Two diagram points (a, b) <= (a2, b2), i.e. a2 <= a < b <= b2."""
    lo = [ax[0] - 1 for ax in m.poset.axes]
    hi = [ax[-1] + 1 for ax in m.poset.axes]

    def coord(k, lo_k, hi_k):
        return lo_k + Fraction(rng.randint(0, 4 * int(hi_k - lo_k)), 4)

    a = tuple(coord(k, lo[k], hi[k]) for k in range(m.dim))
    b = tuple(x + Fraction(rng.randint(1, 8), 4) for x in a)
    a2 = tuple(x - Fraction(rng.randint(0, 4), 4) for x in a)
    b2 = tuple(x + Fraction(rng.randint(0, 4), 4) for x in b)
    return DgmPoint(a, b), DgmPoint(a2, b2)


@given(st.integers(0, 10**6), st.sampled_from([F2, ZZ]), st.sampled_from([(5,), (3, 3)]))
def test_rank_invariant_is_decreasing(seed, coeff, shape):
    m = enumerate_small_modules(seed, shape, coeff)
    f = RankInvariant(m)
    rng = random.Random(seed)
    for _ in range(10):
        small, big = _random_comparable_pair(rng, m)
        assert preorder_leq(f.evaluate(*big), f.evaluate(*small))


@given(st.integers(0, 10**6), st.sampled_from([F2, ZZ]))
def test_image_of_composite_is_below_middle_image(seed, coeff):
    # im(h f g) <= im(f) along a chain of transition maps
    m = enumerate_small_modules(seed, (6,), coeff)
    rng = random.Random(seed)
    i, j, k, l = sorted(rng.randint(0, 5) for _ in range(4))
    o = m.objects
    g, f, h = m.transition_map_idx((i,), (j,)), m.transition_map_idx((j,), (k,)), m.transition_map_idx((k,), (l,))
    whole = image_object(h @ f @ g, o[(i,)], o[(l,)])
    assert preorder_leq(whole, image_object(f, o[(j,)], o[(k,)]))
