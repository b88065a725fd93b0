"""Finite atomic measure algebras.

A ``MeasureSpace`` has ``k`` atoms with strictly positive rational weights, so
the null ideal is trivial and "almost everywhere" means "at every atom". An
``Event`` is a subset of atoms stored as a bitmask.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .errors import (
    ConfigError,
    EmptySpace,
    NonpositiveWeight,
    NotDisjoint,
    NotExhaustive,
    SpaceMismatch,
)

Rational = Union[int, str, Fraction]


@dataclass(frozen=True)
class MeasureSpace:
    """A finite measure algebra given by its atom weights.

    Attributes:
        weights: One strictly positive weight per atom.
    """

    weights: Tuple[Fraction, ...]

    @property
    def atom_count(self) -> int:
        return len(self.weights)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.weights)) - 1

    def full(self) -> "Event":
        return Event(self, self.full_mask)

    def empty(self) -> "Event":
        return Event(self, 0)

    def atom(self, index: int) -> "Event":
        if not 0 <= index < self.atom_count:
            raise IndexError(f"atom {index} outside 0..{self.atom_count - 1}")
        return Event(self, 1 << index)

    def event(self, atoms: Iterable[int]) -> "Event":
        mask = 0
        for index in atoms:
            mask |= self.atom(index).mask
        return Event(self, mask)

    def events(self) -> Iterator["Event"]:
        """Enumerate all 2^k events in bitmask order."""
        for mask in range(1 << self.atom_count):
            yield Event(self, mask)

    def measure(self, event: "Event") -> Fraction:
        self.check(event.space)
        return sum(
            (w for i, w in enumerate(self.weights) if event.mask >> i & 1),
            Fraction(0),
        )

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def check(self, other: "MeasureSpace") -> None:
        if other != self:
            raise SpaceMismatch("objects live on different measure spaces")

    def to_json(self) -> dict:
        return {"weights": [str(w) for w in self.weights]}


def make_space(weights: Sequence[Rational]) -> MeasureSpace:
    """Build a measure space from a list of positive rationals.

    Args:
        weights: Atom weights, given as ints, ``Fraction`` or ``"p/q"`` strings.

    Returns:
        MeasureSpace: The space; the measure of an event is the sum of its weights.

    Raises:
        EmptySpace: If ``weights`` is empty.
        NonpositiveWeight: If any weight is zero or negative.

    Example:
        >>> make_space(["1/2", "1/2"]).total()
        Fraction(1, 1)
    """
    if not weights:
        raise EmptySpace("a measure space needs at least one atom")
    parsed = tuple(Fraction(w) for w in weights)
    for index, weight in enumerate(parsed):
        if weight <= 0:
            raise NonpositiveWeight(f"weight of atom {index} is {weight}, must be > 0")
    return MeasureSpace(parsed)


def load_space(path: Union[str, Path]) -> MeasureSpace:
    """Read a space config file ``{"weights": ["1/2", "1/2"]}``.

    Raises:
        ConfigError: If the file is missing, unreadable or malformed.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            data = json.load(fh)
        return make_space(data["weights"])
    except FileNotFoundError:
        raise ConfigError(f"space file not found: {path}")
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid space file {path}: {e}")


@dataclass(frozen=True)
class Event:
    """An element of the Boolean algebra of a ``MeasureSpace``."""

    space: MeasureSpace
    mask: int

    def _other(self, other: "Event") -> int:
        self.space.check(other.space)
        return other.mask

    def __and__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask & self._other(other))

    def __or__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask | self._other(other))

    def __sub__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask & ~self._other(other))

    def __xor__(self, other: "Event") -> "Event":
        return Event(self.space, self.mask ^ self._other(other))

    def __invert__(self) -> "Event":
        return Event(self.space, self.space.full_mask & ~self.mask)

    def __contains__(self, atom: int) -> bool:
        return bool(self.mask >> atom & 1)

    def __le__(self, other: "Event") -> bool:
        return self.is_subset(other)

    def __bool__(self) -> bool:
        return self.mask != 0

    def meet(self, other: "Event") -> "Event":
        return self & other

    def join(self, other: "Event") -> "Event":
        return self | other

    def complement(self) -> "Event":
        return ~self

    def difference(self, other: "Event") -> "Event":
        return self - other

    def symmetric_difference(self, other: "Event") -> "Event":
        return self ^ other

    def is_subset(self, other: "Event") -> bool:
        return self.mask & ~self._other(other) == 0

    def is_full(self) -> bool:
        return self.mask == self.space.full_mask

    def is_empty(self) -> bool:
        return self.mask == 0

    def atoms(self) -> List[int]:
        return [i for i in range(self.space.atom_count) if self.mask >> i & 1]

    def measure(self) -> Fraction:
        return self.space.measure(self)

    def __repr__(self) -> str:
        return f"Event({self.atoms()})"


def bool_ops(x: Event, y: Event) -> dict:
    """All binary Boolean operations on two events of one space."""
    x.space.check(y.space)
    return {
        "meet": x & y,
        "join": x | y,
        "complement": ~x,
        "difference": x - y,
        "symmetric_difference": x ^ y,
    }


def join_all(space: MeasureSpace, events: Iterable[Event]) -> Event:
    result = space.empty()
    for event in events:
        result = result | event
    return result


def meet_all(space: MeasureSpace, events: Iterable[Event]) -> Event:
    result = space.full()
    for event in events:
        result = result & event
    return result


@dataclass(frozen=True)
class Partition:
    """Pairwise disjoint events whose union is the full event; pieces may be empty."""

    space: MeasureSpace
    pieces: Tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.pieces)

    def piece_of(self, atom: int) -> int:
        """Index of the piece containing ``atom``."""
        for index, piece in enumerate(self.pieces):
            if atom in piece:
                return index
        raise NotExhaustive(f"atom {atom} is in no piece")

    @classmethod
    def from_events(cls, space: MeasureSpace, events: Sequence[Event]) -> "Partition":
        """Refine a finite family into a partition.

        Piece ``j`` is ``events[j]`` minus all earlier events; a final piece
        holds whatever the family does not cover.
        """
        pieces = []
        covered = space.empty()
        for event in events:
            pieces.append(event - covered)
            covered = covered | event
        pieces.append(~covered)
        return cls(space, tuple(pieces))


def validate_partition(pieces: Sequence[Event]) -> Partition:
    """Check that ``pieces`` is a partition of the full event.

    Raises:
        NotDisjoint: If two pieces overlap.
        NotExhaustive: If the pieces do not cover every atom (or the list is empty).
        SpaceMismatch: If the pieces live on different spaces.
    """
    if not pieces:
        raise NotExhaustive("an empty family covers no atom")
    space = pieces[0].space
    covered = space.empty()
    for index, piece in enumerate(pieces):
        space.check(piece.space)
        overlap = covered & piece
        if overlap:
            raise NotDisjoint(f"piece {index} overlaps earlier pieces at {overlap.atoms()}")
        covered = covered | piece
    if not covered.is_full():
        raise NotExhaustive(f"atoms {(~covered).atoms()} are not covered")
    return Partition(space, tuple(pieces))
