"""Conditional analysis on the finite atomic space.

Vectors of measurable dimension, the Euclidean norm as a rational enclosure,
conditional sequences with horizon-scale limsup and Bolzano-Weierstrass
extraction, compact-valued fields of rational boxes, and the conditional
minimum over their grids. Every computation runs atom by atom, so each result
is a per-atom (hence measurable) selection.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .config import NORM
from .errors import (
    EvaluationError,
    LengthMismatch,
    NoAdmissibleIndex,
    NotCovered,
    UnboundedOnHorizon,
)
from .integrands import Expr, dimension, evaluate, parse_expr
from .measure import Event, MeasureSpace, Partition
from .values import CondNat, CondReal

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


def _event(space: MeasureSpace, flags) -> Event:
    return Event(space, sum(1 << a for a, flag in enumerate(flags) if flag))


@dataclass(frozen=True)
class Interval:
    """A closed rational interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def to_json(self) -> List[str]:
        return [str(self.lo), str(self.hi)]


def sqrt_enclosure(q: Fraction, tolerance: Fraction = NORM.tolerance) -> Interval:
    """An interval of width at most ``tolerance`` containing ``sqrt(q)``.

    Exact when ``q`` is the square of a rational.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"square root of negative {q}")
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        root = Fraction(num, den)
        return Interval(root, root)
    scale = math.ceil(1 / Fraction(tolerance))
    floor_root = math.isqrt(math.floor(q * scale * scale))
    return Interval(Fraction(floor_root, scale), Fraction(floor_root + 1, scale))


@dataclass(frozen=True)
class RaggedVec:
    """An element of ``L0(R)^n`` with ``n`` a conditional natural.

    Attributes:
        space: The measure space.
        coords: Per atom, the coordinate tuple; its length is the dimension there.
    """

    space: MeasureSpace
    coords: Tuple[Point, ...]

    def __post_init__(self):
        if len(self.coords) != self.space.atom_count:
            raise LengthMismatch(f"{len(self.coords)} coordinate lists for {self.space.atom_count} atoms")
        object.__setattr__(
            self, "coords", tuple(tuple(Fraction(c) for c in point) for point in self.coords)
        )

    @property
    def dim(self) -> CondNat:
        return CondNat(self.space, tuple(len(point) for point in self.coords))

    def to_json(self) -> List[List[str]]:
        return [[str(c) for c in point] for point in self.coords]


def concat_vectors(xs: Sequence[RaggedVec], partition: Partition) -> RaggedVec:
    """Glue ``xs[j]`` on piece ``j``; dimensions are glued along with the coordinates."""
    if len(xs) != len(partition.pieces):
        raise LengthMismatch(f"{len(xs)} vectors for {len(partition.pieces)} pieces")
    space = partition.space
    for x in xs:
        space.check(x.space)
    return RaggedVec(
        space, tuple(xs[partition.piece_of(a)].coords[a] for a in range(space.atom_count))
    )


@dataclass(frozen=True)
class NormEnclosure:
    """Per-atom enclosures of a conditional real."""

    space: MeasureSpace
    intervals: Tuple[Interval, ...]

    def lower(self) -> CondReal:
        return CondReal(self.space, tuple(i.lo for i in self.intervals))

    def upper(self) -> CondReal:
        return CondReal(self.space, tuple(i.hi for i in self.intervals))

    def exact(self) -> Optional[CondReal]:
        """The value itself if every enclosure is a point."""
        if all(i.is_exact() for i in self.intervals):
            return self.lower()
        return None

    def to_json(self) -> List[List[str]]:
        return [i.to_json() for i in self.intervals]


def euclid_norm(x: RaggedVec, tolerance: Fraction = NORM.tolerance) -> NormEnclosure:
    """``||x||`` per atom, as an enclosure of width at most ``tolerance``."""
    return NormEnclosure(
        x.space,
        tuple(sqrt_enclosure(sum(c * c for c in point), tolerance) for point in x.coords),
    )


def open_ball_contains(center: RaggedVec, radius: CondReal, x: RaggedVec) -> Event:
    """The event where ``x`` lies in the open ball around ``center``; dimensions must match there."""
    center.space.check(x.space)
    flags = []
    for a, (c, p) in enumerate(zip(center.coords, x.coords)):
        r = radius.values[a]
        flags.append(
            len(c) == len(p) and r > 0 and sum((u - v) ** 2 for u, v in zip(c, p)) < r * r
        )
    return _event(x.space, flags)


# sequences


@dataclass(frozen=True)
class CondSequence:
    """A conditional sequence given by one term generator per atom.

    Generators must be pure in the index, so indexing by a conditional natural
    ``m`` picks term ``m_a`` at atom ``a`` and the family is stable.
    """

    space: MeasureSpace
    terms: Tuple[Callable[[int], Fraction], ...]
    name: str = ""

    def __post_init__(self):
        if len(self.terms) != self.space.atom_count:
            raise LengthMismatch(f"{len(self.terms)} generators for {self.space.atom_count} atoms")

    def term(self, atom: int, k: int) -> Fraction:
        return Fraction(self.terms[atom](k))

    def at(self, index: CondNat) -> CondReal:
        self.space.check(index.space)
        return CondReal(
            self.space, tuple(self.term(a, k) for a, k in enumerate(index.values))
        )

    def prefix(self, atom: int, horizon: int) -> List[Fraction]:
        return [self.term(atom, k) for k in range(horizon)]


def is_bounded(seq: CondSequence, r: CondReal, horizon: int) -> Event:
    """The event where ``|x_k| <= r`` for every ``k < horizon``."""
    return _event(
        seq.space,
        (
            all(abs(v) <= r.values[a] for v in seq.prefix(a, horizon))
            for a in range(seq.space.atom_count)
        ),
    )


def limsup(
    seq: CondSequence,
    horizon: int,
    window: int = 10,
    bound: Optional[CondReal] = None,
) -> CondReal:
    """Horizon estimate of ``limsup x_k``: per atom the maximum over ``[horizon - window, horizon)``.

    Args:
        seq: The sequence.
        horizon: First index not inspected.
        window: Length of the tail window.
        bound: Optional bound ``r``; every term before the horizon must satisfy ``|x_k| <= r``.

    Raises:
        UnboundedOnHorizon: If a term exceeds ``bound``, naming the atom and index.
    """
    if not 0 < window <= horizon:
        raise ValueError(f"window {window} must lie in 1..{horizon}")
    estimates = []
    for a in range(seq.space.atom_count):
        terms = seq.prefix(a, horizon)
        if bound is not None:
            for k, v in enumerate(terms):
                if abs(v) > bound.values[a]:
                    raise UnboundedOnHorizon(a, k)
        estimates.append(max(terms[horizon - window:]))
    return CondReal(seq.space, tuple(estimates))


def converges_ae(
    seq: CondSequence, target: CondReal, horizon: int, tail: int, tolerance: Fraction
) -> Event:
    """The event where every term in the tail window is within ``tolerance`` of ``target``."""
    flags = []
    for a in range(seq.space.atom_count):
        tail_terms = [seq.term(a, k) for k in range(max(0, horizon - tail), horizon)]
        flags.append(all(abs(v - target.values[a]) <= tolerance for v in tail_terms))
    return _event(seq.space, flags)


def bw_subsequence(
    seq: CondSequence,
    target: CondReal,
    tolerances: Sequence[Fraction],
    horizon: int = 1000,
) -> List[CondNat]:
    """Extract indices ``n_1 < n_2 < ...`` with ``|x_{n_j} - target| <= eps_j`` at every atom.

    Each step takes the smallest admissible index after the previous one.

    Raises:
        ValueError: If the tolerances are not positive and decreasing.
        NoAdmissibleIndex: If no admissible index exists before the horizon;
            steps are counted from 1.
    """
    tolerances = [Fraction(eps) for eps in tolerances]
    if any(eps <= 0 for eps in tolerances) or any(
        later > earlier for earlier, later in zip(tolerances, tolerances[1:])
    ):
        raise ValueError(f"tolerances must be positive and decreasing: {tolerances}")
    per_atom: List[List[int]] = []
    for a in range(seq.space.atom_count):
        chosen, previous = [], -1
        for step, eps in enumerate(tolerances, start=1):
            k = next(
                (
                    k
                    for k in range(previous + 1, horizon)
                    if abs(seq.term(a, k) - target.values[a]) <= eps
                ),
                None,
            )
            if k is None:
                raise NoAdmissibleIndex(a, step)
            chosen.append(k)
            previous = k
        per_atom.append(chosen)
    logger.debug("bw indices per atom: %s", per_atom)
    return [
        CondNat(seq.space, tuple(indices[j] for indices in per_atom))
        for j in range(len(tolerances))
    ]


# compact fields


@dataclass(frozen=True)
class Box:
    """A closed box ``[lo_1, hi_1] x ... x [lo_n, hi_n]`` with rational corners."""

    lo: Point
    hi: Point

    def __post_init__(self):
        lo = tuple(Fraction(c) for c in self.lo)
        hi = tuple(Fraction(c) for c in self.hi)
        if len(lo) != len(hi):
            raise LengthMismatch(f"corners of dimension {len(lo)} and {len(hi)}")
        if any(l > h for l, h in zip(lo, hi)):
            raise ValueError(f"empty box: lower corner {lo} exceeds upper corner {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __contains__(self, point: Sequence[Fraction]) -> bool:
        return len(point) == self.dim and all(
            l <= c <= h for l, c, h in zip(self.lo, point, self.hi)
        )

    def axis(self, i: int, delta: Fraction) -> List[Fraction]:
        """``lo, lo + delta, ...`` up to ``hi``; ``hi`` itself is always included."""
        count = math.floor((self.hi[i] - self.lo[i]) / delta)
        values = [self.lo[i] + j * delta for j in range(count + 1)]
        if values[-1] != self.hi[i]:
            values.append(self.hi[i])
        return values

    def grid(self, delta: Fraction) -> List[Point]:
        return list(itertools.product(*(self.axis(i, delta) for i in range(self.dim))))

    def to_json(self) -> dict:
        return {"lo": [str(c) for c in self.lo], "hi": [str(c) for c in self.hi]}


@dataclass(frozen=True)
class CompactField:
    """A compact-valued map: per atom a nonempty finite union of boxes and a grid step.

    Attributes:
        space: The measure space.
        boxes: Per atom, the boxes (all of one dimension).
        deltas: Per atom, the positive grid step.
    """

    space: MeasureSpace
    boxes: Tuple[Tuple[Box, ...], ...]
    deltas: Tuple[Fraction, ...]

    def __post_init__(self):
        k = self.space.atom_count
        if len(self.boxes) != k or len(self.deltas) != k:
            raise LengthMismatch(f"compact field needs boxes and steps for {k} atoms")
        object.__setattr__(self, "deltas", tuple(Fraction(d) for d in self.deltas))
        for a, (boxes, delta) in enumerate(zip(self.boxes, self.deltas)):
            if not boxes:
                raise ValueError(f"no box at atom {a}")
            if len({box.dim for box in boxes}) != 1:
                raise ValueError(f"boxes of mixed dimension at atom {a}")
            if delta <= 0:
                raise ValueError(f"grid step at atom {a} must be positive, got {delta}")

    @property
    def dim(self) -> CondNat:
        return CondNat(self.space, tuple(boxes[0].dim for boxes in self.boxes))

    def grid(self, atom: int) -> List[Point]:
        """Grid points of all boxes at ``atom``, deduplicated and in lexicographic order."""
        points = set()
        for box in self.boxes[atom]:
            points.update(box.grid(self.deltas[atom]))
        return sorted(points)

    def to_json(self) -> dict:
        return {
            "boxes": [[box.to_json() for box in boxes] for boxes in self.boxes],
            "deltas": [str(d) for d in self.deltas],
        }


def selections_contain(field: CompactField, x: RaggedVec) -> Event:
    """The event where ``x`` lies in the field's compact set."""
    field.space.check(x.space)
    return _event(
        x.space,
        (any(point in box for box in boxes) for point, boxes in zip(x.coords, field.boxes)),
    )


@dataclass(frozen=True)
class Integrand:
    """Per-atom cost expressions."""

    space: MeasureSpace
    exprs: Tuple[Expr, ...]
    texts: Tuple[str, ...] = ()

    @classmethod
    def from_texts(cls, space: MeasureSpace, texts: Sequence[str]) -> "Integrand":
        if len(texts) != space.atom_count:
            raise LengthMismatch(f"{len(texts)} integrands for {space.atom_count} atoms")
        return cls(space, tuple(parse_expr(t) for t in texts), tuple(texts))

    def value(self, atom: int, point: Point) -> Fraction:
        try:
            return evaluate(self.exprs[atom], point)
        except ZeroDivisionError:
            raise EvaluationError(atom, point)


@dataclass(frozen=True)
class Selection:
    """Result of ``argmin``: a per-atom minimizer and the minimum value."""

    point: RaggedVec
    value: CondReal

    def to_json(self) -> dict:
        return {"point": self.point.to_json(), "value": self.value.to_json()}


def grid_minimum(field: CompactField, f: Integrand, atom: int) -> Tuple[Point, Fraction]:
    """Minimize over the grid at one atom; the first minimizer in lexicographic order wins."""
    best: Optional[Tuple[Point, Fraction]] = None
    for point in field.grid(atom):
        value = f.value(atom, point)
        if best is None or value < best[1]:
            best = (point, value)
    return best


def argmin(field: CompactField, f: Integrand) -> Selection:
    """The conditional minimum of ``f`` over ``field``.

    Raises:
        EvaluationError: If ``f`` divides by zero at a grid point.
        ValueError: If ``f`` reads more coordinates than the field has at some atom.
    """
    field.space.check(f.space)
    points, values = [], []
    for a in range(field.space.atom_count):
        needed = dimension(f.exprs[a])
        if needed > field.dim.values[a]:
            raise ValueError(
                f"integrand at atom {a} reads {needed} coordinates, field has {field.dim.values[a]}"
            )
        point, value = grid_minimum(field, f, a)
        points.append(point)
        values.append(value)
    return Selection(RaggedVec(field.space, tuple(points)), CondReal(field.space, tuple(values)))


@dataclass(frozen=True)
class Ball:
    center: RaggedVec
    radius: CondReal


def heine_borel_subcover(field: CompactField, balls: Sequence[Ball]) -> Tuple[Tuple[int, ...], ...]:
    """Per atom, a finite subcover of the field's grid by open balls, chosen greedily.

    Each round takes the ball covering most uncovered points, the lowest index
    on ties.

    Raises:
        NotCovered: If some grid point lies in none of the balls.
    """
    chosen_per_atom = []
    for a in range(field.space.atom_count):
        uncovered = set(field.grid(a))
        covers = []
        for ball in balls:
            center, r = ball.center.coords[a], ball.radius.values[a]
            covers.append(
                {
                    p
                    for p in uncovered
                    if len(p) == len(center) and r > 0
                    and sum((u - v) ** 2 for u, v in zip(p, center)) < r * r
                }
            )
        missing = uncovered - set().union(*covers) if covers else uncovered
        if missing:
            raise NotCovered(f"atom {a}: points {sorted(missing)[:3]} are in no ball")
        chosen = []
        while uncovered:
            best = max(range(len(balls)), key=lambda i: (len(covers[i] & uncovered), -i))
            chosen.append(best)
            uncovered -= covers[best]
        chosen_per_atom.append(tuple(sorted(chosen)))
    return tuple(chosen_per_atom)
