import pytest

from condmodel.errors import EmptyFiber, EmptyList, UnboundedFiber
from condmodel.measure import make_space, validate_partition
from condmodel.sets import (
    Fiber,
    bottom,
    bounded_above,
    concat_sets,
    cond_complement,
    cond_difference,
    cond_intersect,
    cond_set_from_json,
    cond_union,
    decode_pair,
    encode_pair,
    full_set,
    includes,
    is_finite,
    make_stable,
    member,
    product,
    project_first,
    restrict,
    seq_intersect,
    seq_union,
)
from condmodel.values import CondNat


@pytest.fixture
def space():
    return make_space(["1/2", "1/2"])


@pytest.fixture
def evens_odds(space):
    """{0,2} on atom 0 and {1,3} on atom 1"""
    return make_stable([{0, 2}, {1, 3}], space.full())


def test_fiber_algebra():
    finite = Fiber.finite({1, 2})
    cofinite = Fiber.cofinite_of({2})
    assert 5 in cofinite and 2 not in cofinite
    assert finite.intersect(cofinite) == Fiber.finite({1})
    assert finite.union(cofinite) == Fiber.naturals()
    assert finite.complement() == Fiber.cofinite_of({1, 2})
    assert Fiber.finite({1}).issubset(finite)
    assert not cofinite.issubset(finite)
    assert Fiber.from_mask(0b101) == Fiber.finite({0, 2})


def test_fiber_json():
    assert Fiber.cofinite_of({3}).to_json() == {"cofin": [3]}
    assert Fiber.from_json({"fin": [0, 4]}) == Fiber.finite({0, 4})


def test_make_stable_rejects_empty_fiber(space):
    with pytest.raises(EmptyFiber):
        make_stable([set(), {1}], space.full())


def test_make_stable_ignores_off_carrier(space):
    n_set = make_stable([{0}, set()], space.atom(0))
    assert n_set.fibers == (Fiber.finite({0}), None)


def test_member(space, evens_odds):
    n = CondNat(space, (2, 2))
    assert member(n, evens_odds).atoms() == [0]
    assert member(n, bottom(space)).is_empty()
    assert member(n, full_set(space)).is_full()


def test_intersection_drops_empty_fibers(space, evens_odds):
    other = make_stable([{2}, {0}], space.full())
    result = cond_intersect(evens_odds, other)
    assert result.carrier.atoms() == [0]
    assert result.fiber(0) == Fiber.finite({2})


def test_complement_of_bottom_is_full(space):
    assert cond_complement(bottom(space)) == full_set(space)
    assert cond_complement(full_set(space)) == bottom(space)


def test_union_and_difference(space, evens_odds):
    partial = make_stable([{5}, set()], space.atom(0))
    union = cond_union(evens_odds, partial)
    assert union.fiber(0) == Fiber.finite({0, 2, 5})
    assert cond_difference(union, partial) == evens_odds


def test_sequence_operations(space, evens_odds):
    with pytest.raises(EmptyList):
        seq_union([])
    with pytest.raises(EmptyList):
        seq_intersect([])
    assert seq_union([evens_odds]) == evens_odds
    assert seq_intersect([evens_odds, full_set(space)]) == evens_odds


def test_includes(space, evens_odds):
    assert includes(bottom(space), evens_odds)
    assert includes(evens_odds, full_set(space))
    assert not includes(full_set(space), evens_odds)
    assert includes(restrict(evens_odds, space.atom(1)), evens_odds)


def test_concat_sets(space, evens_odds):
    partition = validate_partition([space.atom(0), space.atom(1)])
    glued = concat_sets([evens_odds, bottom(space)], partition)
    assert glued.carrier.atoms() == [0]
    assert glued.fiber(0) == Fiber.finite({0, 2})


def test_finiteness_and_bound(space, evens_odds):
    assert is_finite(evens_odds)
    assert bounded_above(evens_odds).values == (2, 3)
    assert bounded_above(full_set(space)) is None


@pytest.mark.parametrize("i,j", [(0, 0), (1, 0), (0, 1), (3, 5)])
def test_pairing(i, j):
    assert decode_pair(encode_pair(i, j)) == (i, j)


def test_decode_rejects_non_codes():
    # 3 = 1^2 + 2 and 2 > 1
    with pytest.raises(ValueError):
        decode_pair(3)


def test_product_and_projection(space, evens_odds):
    singles = make_stable([{1}, {4}], space.full())
    pairs = product(evens_odds, singles)
    assert project_first(pairs) == evens_odds
    with pytest.raises(UnboundedFiber):
        product(full_set(space), singles)


def test_json_round_trip(space, evens_odds):
    assert cond_set_from_json(space, evens_odds.to_json()) == evens_odds


@pytest.fixture
def n0(space):
    return make_stable([{1, 2}, {5}], space.full())


@pytest.fixture
def m0(space):
    return make_stable([{9}, {5, 6}], space.full())


def test_member_examples(space, n0):
    assert member(CondNat(space, (2, 7)), n0).atoms() == [0]
    assert member(CondNat(space, (1, 5)), n0).is_full()
    assert member(CondNat(space, (0, 0)), n0).is_empty()


def test_concat_examples(space, n0, m0):
    a_then_b = validate_partition([space.atom(0), space.atom(1)])
    glued = concat_sets([n0, m0], a_then_b)
    assert glued.fibers == (Fiber.finite({1, 2}), Fiber.finite({5, 6}))
    b_then_a = validate_partition([space.atom(1), space.atom(0)])
    crossed = concat_sets([restrict(n0, space.atom(0)), m0], b_then_a)
    assert crossed.carrier.atoms() == [0]
    assert crossed.fiber(0) == Fiber.finite({9})


def test_intersect_and_complement_examples(space, n0):
    m = make_stable([{3}, {5, 6}], space.full())
    result = cond_intersect(n0, m)
    assert result.carrier.atoms() == [1]
    assert result.fiber(1) == Fiber.finite({5})
    assert cond_intersect(n0, bottom(space)) == bottom(space)
    comp = cond_complement(n0)
    assert comp.fibers == (Fiber.cofinite_of({1, 2}), Fiber.cofinite_of({5}))


def test_union_example(space, n0, m0):
    union = seq_union([restrict(n0, space.atom(0)), restrict(m0, space.atom(1))])
    assert union.carrier.is_full()
    assert union.fibers == (Fiber.finite({1, 2}), Fiber.finite({5, 6}))


def test_product_example(space, n0):
    first = make_stable([{0}, {1}], space.full())
    second = make_stable([{1}, {0}], space.full())
    assert product(first, second).fibers == (Fiber.finite({1}), Fiber.finite({2}))
    assert product(n0, bottom(space)) == bottom(space)
