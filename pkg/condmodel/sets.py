"""The conditional power set of L0(N).

A stable set of conditional naturals on a finite atomic space is exactly a
product of per-atom fibers, so a ``CondSet`` is a carrier event plus one fiber
per carrier atom. Fibers are finite or cofinite subsets of N, which keeps the
class closed under intersection, union and complement.
"""

import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import EmptyFiber, EmptyList, LengthMismatch, UnboundedFiber
from .measure import Event, MeasureSpace, Partition
from .values import CondNat


@dataclass(frozen=True)
class Fiber:
    """A finite or cofinite subset of N.

    Attributes:
        cofinite: If true the fiber is ``N \\ elems``, otherwise it is ``elems``.
        elems: The listed elements, or the finite complement of a cofinite fiber.
    """

    cofinite: bool
    elems: FrozenSet[int]

    @classmethod
    def finite(cls, elems: Iterable[int]) -> "Fiber":
        return cls(False, frozenset(elems))

    @classmethod
    def cofinite_of(cls, missing: Iterable[int]) -> "Fiber":
        return cls(True, frozenset(missing))

    @classmethod
    def naturals(cls) -> "Fiber":
        return cls(True, frozenset())

    @classmethod
    def from_mask(cls, mask: int) -> "Fiber":
        return cls(False, frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))

    def __contains__(self, n: int) -> bool:
        return (n in self.elems) != self.cofinite

    def is_empty(self) -> bool:
        return not self.cofinite and not self.elems

    def is_naturals(self) -> bool:
        return self.cofinite and not self.elems

    def is_finite(self) -> bool:
        return not self.cofinite

    def complement(self) -> "Fiber":
        return Fiber(not self.cofinite, self.elems)

    def intersect(self, other: "Fiber") -> "Fiber":
        if self.cofinite and other.cofinite:
            return Fiber(True, self.elems | other.elems)
        if self.cofinite:
            return Fiber(False, other.elems - self.elems)
        if other.cofinite:
            return Fiber(False, self.elems - other.elems)
        return Fiber(False, self.elems & other.elems)

    def union(self, other: "Fiber") -> "Fiber":
        return self.complement().intersect(other.complement()).complement()

    def issubset(self, other: "Fiber") -> bool:
        return self.intersect(other.complement()).is_empty()

    def to_json(self) -> dict:
        key = "cofin" if self.cofinite else "fin"
        return {key: sorted(self.elems)}

    @classmethod
    def from_json(cls, data: dict) -> "Fiber":
        if "cofin" in data:
            return cls.cofinite_of(data["cofin"])
        return cls.finite(data["fin"])

    def __repr__(self) -> str:
        body = ",".join(str(n) for n in sorted(self.elems))
        return f"N\\{{{body}}}" if self.cofinite else f"{{{body}}}"


@dataclass(frozen=True)
class CondSet:
    """An element ``N|A`` of the conditional power set.

    Attributes:
        carrier: The event ``A`` on which the set lives.
        fibers: One entry per atom; a nonempty ``Fiber`` on the carrier and
            ``None`` elsewhere. The representation is canonical, so structural
            equality is set equality.
    """

    carrier: Event
    fibers: Tuple[Optional[Fiber], ...]

    @property
    def space(self) -> MeasureSpace:
        return self.carrier.space

    def fiber(self, atom: int) -> Optional[Fiber]:
        return self.fibers[atom]

    def is_bottom(self) -> bool:
        return self.carrier.is_empty()

    def to_json(self) -> dict:
        return {
            "carrier": self.carrier.atoms(),
            "fibers": [None if f is None else f.to_json() for f in self.fibers],
        }

    def __repr__(self) -> str:
        if self.is_bottom():
            return "{*}"
        parts = [f"{a}:{self.fibers[a]!r}" for a in self.carrier.atoms()]
        return "CondSet(" + ", ".join(parts) + ")"


def _build(space: MeasureSpace, fibers: Sequence[Optional[Fiber]]) -> CondSet:
    """Normalize: empty fibers drop out of the carrier."""
    kept = tuple(None if f is None or f.is_empty() else f for f in fibers)
    mask = sum(1 << a for a, f in enumerate(kept) if f is not None)
    return CondSet(Event(space, mask), kept)


def bottom(space: MeasureSpace) -> CondSet:
    """The distinguished object ``N|∅ = {*}``."""
    return CondSet(space.empty(), (None,) * space.atom_count)


def full_set(space: MeasureSpace) -> CondSet:
    """``L0(N)|Ω``."""
    return CondSet(space.full(), (Fiber.naturals(),) * space.atom_count)


def make_stable(per_atom_sets: Sequence, carrier: Event) -> CondSet:
    """Build the stable set with the given fibers on ``carrier``.

    Args:
        per_atom_sets: One entry per atom; a ``Fiber`` or an iterable of naturals
            (read as a finite fiber). Entries off the carrier are ignored.
        carrier: The carrier event.

    Raises:
        EmptyFiber: If a carrier atom is given an empty set.
    """
    space = carrier.space
    if len(per_atom_sets) != space.atom_count:
        raise LengthMismatch(f"{len(per_atom_sets)} fibers for {space.atom_count} atoms")
    fibers: List[Optional[Fiber]] = []
    for atom in range(space.atom_count):
        if atom not in carrier:
            fibers.append(None)
            continue
        raw = per_atom_sets[atom]
        fiber = raw if isinstance(raw, Fiber) else Fiber.finite(raw)
        if fiber.is_empty():
            raise EmptyFiber(f"fiber at carrier atom {atom} is empty")
        fibers.append(fiber)
    return CondSet(carrier, tuple(fibers))


def cond_set_from_json(space: MeasureSpace, data: dict) -> CondSet:
    fibers = [None if f is None else Fiber.from_json(f) for f in data["fibers"]]
    return make_stable(fibers, space.event(data["carrier"]))


def restrict(n_set: CondSet, event: Event) -> CondSet:
    """``N|A`` restricted further to ``A ∩ event``."""
    carrier = n_set.carrier & event
    fibers = tuple(f if a in carrier else None for a, f in enumerate(n_set.fibers))
    return CondSet(carrier, fibers)


def concat_sets(sets: Sequence[CondSet], partition: Partition) -> CondSet:
    """Concatenate ``(N_k|B_k)`` along ``(A_k)``; the carrier is ``∪_k (A_k ∩ B_k)``."""
    if len(sets) != len(partition.pieces):
        raise LengthMismatch(f"{len(sets)} sets for {len(partition.pieces)} pieces")
    space = partition.space
    fibers: List[Optional[Fiber]] = []
    for atom in range(space.atom_count):
        chosen = sets[partition.piece_of(atom)]
        space.check(chosen.space)
        fibers.append(chosen.fibers[atom])
    return _build(space, fibers)


def member(n: CondNat, n_set: CondSet) -> Event:
    """The conditional element relation ``i(n, N|A)``.

    Returns the largest subevent of the carrier on which ``n`` lies in ``N``.
    """
    n_set.space.check(n.space)
    mask = 0
    for atom, fiber in enumerate(n_set.fibers):
        if fiber is not None and n.values[atom] in fiber:
            mask |= 1 << atom
    return Event(n_set.space, mask)


def cond_intersect(first: CondSet, second: CondSet) -> CondSet:
    """``N|A ⊓ M|B``: fiber intersections on the atoms of ``A ∩ B`` where they meet."""
    first.space.check(second.space)
    fibers = [
        None if f is None or g is None else f.intersect(g)
        for f, g in zip(first.fibers, second.fibers)
    ]
    return _build(first.space, fibers)


def cond_complement(n_set: CondSet) -> CondSet:
    """``(N|A)^⊏``: everything off the carrier, and ``N \\ fiber`` on it."""
    fibers = [
        Fiber.naturals() if f is None else f.complement() for f in n_set.fibers
    ]
    return _build(n_set.space, fibers)


def cond_union(first: CondSet, second: CondSet) -> CondSet:
    return seq_union([first, second])


def cond_difference(first: CondSet, second: CondSet) -> CondSet:
    return cond_intersect(first, cond_complement(second))


def seq_intersect(sets: Sequence[CondSet]) -> CondSet:
    """Intersection of a nonempty sequence; empty where some fiber is missing or they fail to meet."""
    if not sets:
        raise EmptyList("intersection of an empty sequence")
    result = sets[0]
    for other in sets[1:]:
        result = cond_intersect(result, other)
    return result


def seq_union(sets: Sequence[CondSet]) -> CondSet:
    """Union of a nonempty sequence; the carrier is the union of the carriers."""
    if not sets:
        raise EmptyList("union of an empty sequence")
    space = sets[0].space
    fibers: List[Optional[Fiber]] = [None] * space.atom_count
    for n_set in sets:
        space.check(n_set.space)
        for atom, fiber in enumerate(n_set.fibers):
            if fiber is None:
                continue
            fibers[atom] = fiber if fibers[atom] is None else fibers[atom].union(fiber)
    return _build(space, fibers)


def includes(first: CondSet, second: CondSet) -> bool:
    """``N|A ⊑ M|B``: ``A ⊆ B`` and fiberwise containment on ``A``."""
    first.space.check(second.space)
    if not first.carrier.is_subset(second.carrier):
        return False
    return all(
        f is None or f.issubset(g) for f, g in zip(first.fibers, second.fibers)
    )


def is_finite(n_set: CondSet) -> bool:
    """A conditional set is finite iff every fiber on its carrier is finite."""
    return all(f is None or f.is_finite() for f in n_set.fibers)


def bounded_above(n_set: CondSet) -> Optional[CondNat]:
    """The per-atom maximum of a finite set, 0 off the carrier; ``None`` if some fiber is cofinite."""
    if not is_finite(n_set):
        return None
    return CondNat(
        n_set.space,
        tuple(0 if f is None else max(f.elems) for f in n_set.fibers),
    )


def encode_pair(i: int, j: int) -> int:
    """The pairing ``(i, j) ↦ (i + j)^2 + i``."""
    return (i + j) ** 2 + i


def decode_pair(code: int) -> Tuple[int, int]:
    """Inverse of ``encode_pair``.

    Raises:
        ValueError: If ``code`` is not in the image of the pairing.
    """
    s = math.isqrt(code)
    i = code - s * s
    if i > s:
        raise ValueError(f"{code} is not a pair code")
    return i, s - i


def product(first: CondSet, second: CondSet) -> CondSet:
    """The product ``N|A × M|B`` as a set of encoded pairs on ``A ∩ B``.

    Raises:
        UnboundedFiber: If a fiber on ``A ∩ B`` is cofinite.
    """
    first.space.check(second.space)
    fibers: List[Optional[Fiber]] = []
    for atom, (f, g) in enumerate(zip(first.fibers, second.fibers)):
        if f is None or g is None:
            fibers.append(None)
            continue
        if f.cofinite or g.cofinite:
            raise UnboundedFiber(f"cofinite fiber at atom {atom} has no finite product image")
        fibers.append(Fiber.finite(encode_pair(i, j) for i in f.elems for j in g.elems))
    return _build(first.space, fibers)


def project_first(pairs: CondSet) -> CondSet:
    """Project a set of encoded pairs to its first coordinates."""
    fibers: List[Optional[Fiber]] = []
    for atom, fiber in enumerate(pairs.fibers):
        if fiber is None:
            fibers.append(None)
            continue
        if fiber.cofinite:
            raise UnboundedFiber(f"cofinite fiber at atom {atom}")
        fibers.append(Fiber.finite(decode_pair(code)[0] for code in fiber.elems))
    return _build(pairs.space, fibers)
