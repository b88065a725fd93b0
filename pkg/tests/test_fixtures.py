from fractions import Fraction

import pytest

from condmodel.analysis import bw_subsequence, limsup
from condmodel.fixtures import (
    FAMILIES,
    FIXTURES,
    HORIZON,
    SEARCH_HORIZON,
    TOLERANCES,
    WINDOW,
    get_fixture,
)


def test_twenty_fixtures():
    assert len(FIXTURES) == 20
    assert len({f.name for f in FIXTURES}) == 20
    assert FIXTURES[0].name == "alternating|harmonic"
    assert FIXTURES[1].space.weights == (Fraction(1, 3), Fraction(2, 3))


def test_get_fixture():
    assert get_fixture("constant|constant").families == ("constant", "constant")
    with pytest.raises(KeyError):
        get_fixture("nope")


@pytest.mark.parametrize("fixture", FIXTURES, ids=lambda f: f.name)
def test_window_estimate_within_certified_error(fixture):
    estimate = limsup(fixture.sequence(), HORIZON, WINDOW)
    exact, error = fixture.limsup(), fixture.error()
    for atom in range(2):
        assert abs(estimate.values[atom] - exact.values[atom]) <= error.values[atom]


@pytest.mark.parametrize("fixture", FIXTURES, ids=lambda f: f.name)
def test_limsup_is_a_cluster_point(fixture):
    indices = bw_subsequence(fixture.sequence(), fixture.limsup(), TOLERANCES, SEARCH_HORIZON)
    for first, second in zip(indices, indices[1:]):
        assert all(a < b for a, b in zip(first.values, second.values))


def test_family_limsup_values():
    assert FAMILIES["sevenths"].limsup == Fraction(6, 7)
    assert FAMILIES["triangular"].term(2) == 3
    assert FAMILIES["fives"].term(4) == 2
