"""Bundled conditional sequences with known limsup.

Each fixture puts one scalar sequence family on each atom of a two-atom
space. A family carries its exact limsup and a certified bound on how far the
window maximum over ``[HORIZON - WINDOW, HORIZON)`` can be from it.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .analysis import CondSequence
from .measure import MeasureSpace, make_space
from .values import CondReal

HORIZON = 200
WINDOW = 20
SEARCH_HORIZON = 1000
TOLERANCES = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))


@dataclass(frozen=True)
class Family:
    term: Callable[[int], Fraction]
    limsup: Fraction
    error: Fraction


FAMILIES: Dict[str, Family] = {
    "alternating": Family(lambda k: Fraction((-1) ** k), Fraction(1), Fraction(0)),
    "harmonic": Family(lambda k: Fraction(1, k + 1), Fraction(0), Fraction(1, 180)),
    "constant": Family(lambda k: Fraction(5, 2), Fraction(5, 2), Fraction(0)),
    "parity": Family(lambda k: Fraction(k % 2), Fraction(1), Fraction(0)),
    "thirds": Family(lambda k: Fraction(k % 3, 2), Fraction(1), Fraction(0)),
    "damped_alternating": Family(
        lambda k: (-1) ** k * (1 + Fraction(1, k + 1)), Fraction(1), Fraction(1, 180)
    ),
    "increasing": Family(lambda k: 1 - Fraction(1, k + 1), Fraction(1), Fraction(1, 199)),
    "signed_harmonic": Family(lambda k: Fraction((-1) ** k, k + 1), Fraction(0), Fraction(1, 180)),
    "quarters": Family(lambda k: Fraction(k % 4, 3), Fraction(1), Fraction(0)),
    "negative_parity": Family(lambda k: -Fraction(k % 2), Fraction(0), Fraction(0)),
    "geometric": Family(lambda k: Fraction(1, 2 ** k), Fraction(0), Fraction(1, 2 ** 180)),
    "pairs": Family(lambda k: Fraction((-1) ** (k // 2)), Fraction(1), Fraction(0)),
    "fives": Family(lambda k: Fraction(k % 5 - 2), Fraction(2), Fraction(0)),
    "odd_increasing": Family(
        lambda k: (k % 2) * (1 - Fraction(1, k + 1)), Fraction(1), Fraction(1, 199)
    ),
    "squared_damping": Family(
        lambda k: 3 + Fraction((-1) ** k, (k + 1) ** 2), Fraction(3), Fraction(1, 180 ** 2)
    ),
    "sevenths": Family(lambda k: Fraction(k % 7, 7), Fraction(6, 7), Fraction(0)),
    "signed_geometric": Family(lambda k: Fraction((-1) ** k, 2 ** k), Fraction(0), Fraction(1, 2 ** 180)),
    "descending_cycle": Family(lambda k: Fraction(5 - k % 3), Fraction(5), Fraction(0)),
    "half_parity": Family(lambda k: Fraction(1, 2) + Fraction((-1) ** k, 2), Fraction(1), Fraction(0)),
    "triangular": Family(lambda k: Fraction(k * (k + 1) // 2 % 4), Fraction(3), Fraction(0)),
}


@dataclass(frozen=True)
class SequenceFixture:
    """A two-atom conditional sequence with analytic limsup."""

    name: str
    families: Tuple[str, str]
    weights: Tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(1, 2))

    @property
    def space(self) -> MeasureSpace:
        return make_space(self.weights)

    def sequence(self) -> CondSequence:
        return CondSequence(
            self.space, tuple(FAMILIES[f].term for f in self.families), self.name
        )

    def limsup(self) -> CondReal:
        return CondReal(self.space, tuple(FAMILIES[f].limsup for f in self.families))

    def error(self) -> CondReal:
        return CondReal(self.space, tuple(FAMILIES[f].error for f in self.families))


_PAIRS = [
    ("alternating", "harmonic"),
    ("constant", "constant"),
    ("parity", "constant"),
    ("thirds", "damped_alternating"),
    ("increasing", "signed_harmonic"),
    ("quarters", "negative_parity"),
    ("geometric", "pairs"),
    ("fives", "odd_increasing"),
    ("squared_damping", "sevenths"),
    ("signed_geometric", "descending_cycle"),
    ("half_parity", "triangular"),
    ("harmonic", "alternating"),
    ("damped_alternating", "increasing"),
    ("signed_harmonic", "quarters"),
    ("negative_parity", "geometric"),
    ("pairs", "fives"),
    ("odd_increasing", "squared_damping"),
    ("sevenths", "signed_geometric"),
    ("descending_cycle", "half_parity"),
    ("triangular", "thirds"),
]

FIXTURES: List[SequenceFixture] = [
    SequenceFixture(
        f"{a}|{b}",
        (a, b),
        (Fraction(1, 2), Fraction(1, 2)) if i % 2 == 0 else (Fraction(1, 3), Fraction(2, 3)),
    )
    for i, (a, b) in enumerate(_PAIRS)
]


def get_fixture(name: str) -> SequenceFixture:
    for fixture in FIXTURES:
        if fixture.name == name:
            return fixture
    raise KeyError(f"no sequence fixture named {name!r}; known: {[f.name for f in FIXTURES]}")
