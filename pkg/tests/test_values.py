from fractions import Fraction

import pytest

from condmodel.errors import DivisionByZeroAtAtom, LengthMismatch, UnsupportedOperation
from condmodel.measure import make_space, validate_partition
from condmodel.values import (
    CondNat,
    CondReal,
    agree,
    arith,
    compare,
    concat_values,
    parse_value,
)


@pytest.fixture
def space():
    return make_space([1, 1, 2])


def test_cond_nat_arithmetic(space):
    x = CondNat(space, (1, 2, 3))
    y = CondNat(space, (4, 0, 1))
    assert (x + y).values == (5, 2, 4)
    assert (x * y).values == (4, 0, 3)
    assert arith("·", x, y).values == (4, 0, 3)


def test_cond_nat_rejects_negative(space):
    with pytest.raises(ValueError):
        CondNat(space, (1, -1, 0))


def test_cond_nat_has_no_subtraction(space):
    x = CondNat.constant(space, 1)
    with pytest.raises(UnsupportedOperation):
        arith("-", x, x)
    with pytest.raises(UnsupportedOperation):
        arith("/", x, x)


def test_length_mismatch(space):
    with pytest.raises(LengthMismatch):
        CondReal(space, (1, 2))


def test_cond_real_division(space):
    x = CondReal(space, ("1/2", 3, -1))
    y = CondReal(space, (2, 3, 4))
    assert (x / y).values == (Fraction(1, 4), Fraction(1), Fraction(-1, 4))
    assert (x - y).values == (Fraction(-3, 2), Fraction(0), Fraction(-5))


def test_division_by_zero_reports_event(space):
    x = CondReal.constant(space, 1)
    y = CondReal(space, (0, 1, 0))
    with pytest.raises(DivisionByZeroAtAtom) as info:
        x / y
    assert info.value.event.atoms() == [0, 2]


def test_mixed_types_rejected(space):
    with pytest.raises(UnsupportedOperation):
        CondNat.constant(space, 1) + CondReal.constant(space, 1)


def test_compare_is_partition(space):
    x = CondReal(space, (1, 2, 3))
    y = CondReal(space, (2, 2, 2))
    lt, eq, gt = compare(x, y)
    assert (lt.atoms(), eq.atoms(), gt.atoms()) == ([0], [1], [2])
    assert (lt | eq | gt).is_full()
    assert agree(x, y).atoms() == [1]


def test_concat_glues_along_partition(space):
    partition = validate_partition([space.event([0, 2]), space.event([1])])
    glued = concat_values(
        [CondNat.constant(space, 7), CondNat.constant(space, 9)], partition
    )
    assert glued.values == (7, 9, 7)


def test_concat_length_mismatch(space):
    partition = validate_partition([space.full()])
    with pytest.raises(LengthMismatch):
        concat_values([CondNat.constant(space, 1)] * 2, partition)


def test_parse_value(space):
    assert parse_value(space, ["1", "0", "5"]).values == (1, 0, 5)
    real = parse_value(space, ["3", "-2/7", "0"], CondReal)
    assert real.values[1] == Fraction(-2, 7)
    assert real.to_json() == ["3", "-2/7", "0"]


def test_cross_gluing():
    s2 = make_space(["1/2", "1/2"])
    partition = validate_partition([s2.atom(1), s2.atom(0)])
    glued = concat_values([CondNat(s2, (1, 9)), CondNat(s2, (9, 3))], partition)
    assert glued.values == (9, 9)
