"""Elements of L0(N) and L0(R) as one exact value per atom.

``CondNat`` holds nonnegative Python ints, ``CondReal`` holds ``Fraction``s.
Arithmetic and order are pointwise; concatenation glues values along a
partition.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Sequence, Tuple, TypeVar, Union

from .errors import (
    DivisionByZeroAtAtom,
    LengthMismatch,
    UnsupportedOperation,
)
from .measure import Event, MeasureSpace, Partition

V = TypeVar("V", bound="CondValue")


@dataclass(frozen=True)
class CondValue:
    space: MeasureSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.space.atom_count:
            raise LengthMismatch(
                f"{len(self.values)} values for {self.space.atom_count} atoms"
            )

    def __getitem__(self, atom: int):
        return self.values[atom]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def constant(cls, space: MeasureSpace, value) -> "CondValue":
        return cls(space, (value,) * space.atom_count)

    def _pointwise(self, other: "CondValue", fn: Callable) -> tuple:
        self.space.check(other.space)
        if type(other) is not type(self):
            raise UnsupportedOperation(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        return tuple(fn(a, b) for a, b in zip(self.values, other.values))

    def __add__(self, other):
        return type(self)(self.space, self._pointwise(other, lambda a, b: a + b))

    def __mul__(self, other):
        return type(self)(self.space, self._pointwise(other, lambda a, b: a * b))

    def to_json(self) -> list:
        return [str(v) for v in self.values]


@dataclass(frozen=True)
class CondNat(CondValue):
    """An element of L0(N): a nonnegative integer per atom."""

    def __post_init__(self):
        super().__post_init__()
        for atom, value in enumerate(self.values):
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"value {value!r} at atom {atom} is not a natural number")

    def __sub__(self, other):
        raise UnsupportedOperation("subtraction is not defined on L0(N)")

    def __truediv__(self, other):
        raise UnsupportedOperation("division is not defined on L0(N)")

    def to_real(self) -> "CondReal":
        return CondReal(self.space, tuple(Fraction(v) for v in self.values))


@dataclass(frozen=True)
class CondReal(CondValue):
    """An element of L0(Q), standing in for L0(R): a rational per atom."""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        super().__post_init__()

    def __sub__(self, other):
        return CondReal(self.space, self._pointwise(other, lambda a, b: a - b))

    def __neg__(self):
        return CondReal(self.space, tuple(-v for v in self.values))

    def __abs__(self):
        return CondReal(self.space, tuple(abs(v) for v in self.values))

    def __truediv__(self, other):
        self.space.check(other.space)
        zero = Event(
            self.space,
            sum(1 << i for i, v in enumerate(other.values) if v == 0),
        )
        if zero:
            raise DivisionByZeroAtAtom(zero)
        return CondReal(self.space, self._pointwise(other, lambda a, b: a / b))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)


Value = Union[CondNat, CondReal]

_OPERATORS: Dict[str, Callable] = {
    "+": lambda x, y: x + y,
    "*": lambda x, y: x * y,
    "·": lambda x, y: x * y,
    "-": lambda x, y: x - y,
    "−": lambda x, y: x - y,
    "/": lambda x, y: x / y,
}


def arith(op: str, x: Value, y: Value) -> Value:
    """Apply ``+``, ``*``, ``-`` or ``/`` pointwise.

    Raises:
        UnsupportedOperation: For ``-`` or ``/`` on ``CondNat`` or mixed types.
        DivisionByZeroAtAtom: If the divisor is zero somewhere; carries that event.
    """
    try:
        fn = _OPERATORS[op]
    except KeyError:
        raise UnsupportedOperation(f"unknown operator {op!r}")
    return fn(x, y)


def concat_values(xs: Sequence[V], partition: Partition) -> V:
    """Glue ``xs[j]`` on piece ``j`` of ``partition``.

    The result agrees with ``xs[j]`` on every atom of piece ``j``; it is unique
    because the pieces cover every atom exactly once.
    """
    if len(xs) != len(partition.pieces):
        raise LengthMismatch(f"{len(xs)} values for {len(partition.pieces)} pieces")
    if not xs:
        raise LengthMismatch("nothing to concatenate")
    space = partition.space
    for x in xs:
        space.check(x.space)
    cls = type(xs[0])
    glued = tuple(xs[partition.piece_of(atom)][atom] for atom in range(space.atom_count))
    return cls(space, glued)


def _where(space: MeasureSpace, flags) -> Event:
    mask = 0
    for atom, flag in enumerate(flags):
        if flag:
            mask |= 1 << atom
    return Event(space, mask)


def compare(x: Value, y: Value) -> Tuple[Event, Event, Event]:
    """The events where ``x < y``, ``x = y`` and ``x > y``; always a partition."""
    x.space.check(y.space)
    if type(x) is not type(y):
        raise UnsupportedOperation(
            f"cannot compare {type(x).__name__} with {type(y).__name__}"
        )
    pairs = list(zip(x.values, y.values))
    return (
        _where(x.space, (a < b for a, b in pairs)),
        _where(x.space, (a == b for a, b in pairs)),
        _where(x.space, (a > b for a, b in pairs)),
    )


def agree(x: Value, y: Value) -> Event:
    """The event on which two values coincide."""
    return compare(x, y)[1]


def parse_value(space: MeasureSpace, items: Sequence[str], cls=CondNat) -> Value:
    """Decode a per-atom array of strings such as ``["3", "-2/7"]``."""
    if cls is CondNat:
        return CondNat(space, tuple(int(item) for item in items))
    return CondReal(space, tuple(Fraction(item) for item in items))
