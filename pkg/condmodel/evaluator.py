"""The conditional model: evaluation of L2 formulas to events.

Quantifiers are relativized to bounded domains: number variables range over
per-atom values ``0..B-1`` and set variables over per-atom subsets of
``0..B_set-1``, the empty subset meaning "atom outside the carrier". Truth of
a formula at an atom depends only on the assignment's values at that atom, so
evaluation runs atom by atom and quantifies over scalars; the join over glued
conditional objects gives the same event (see ``eval_formula_glued``).
"""

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .config import BOUNDS
from .errors import (
    AxiomFailure,
    BoundTooSmallWarning,
    ConfigError,
    FreeSetVariableClash,
    NotArithmetical,
    NotExistential,
    UnboundVariable,
)
from .measure import Event, MeasureSpace, join_all
from .sets import CondSet, Fiber, make_stable, member
from .syntax import (
    And,
    Eq,
    ExistsNum,
    ExistsSet,
    Formula,
    ForallNum,
    Iff,
    In,
    Lt,
    Not,
    NumVar,
    One,
    Plus,
    Term,
    Times,
    Zero,
    desugar,
    format_formula,
    free_vars,
    is_arithmetical,
    parse,
    term_vars,
)
from .values import CondNat, agree, compare

logger = logging.getLogger(__name__)

FormulaLike = Union[Formula, str]


@dataclass(frozen=True)
class Bounds:
    """Bounded domains for the quantifiers.

    Attributes:
        num_bound: Number quantifiers range over ``0..num_bound-1`` per atom.
        set_bound: Set quantifiers range over subsets of ``0..set_bound-1`` per atom.
    """

    num_bound: int = BOUNDS.num_bound
    set_bound: int = BOUNDS.set_bound

    def __post_init__(self):
        if self.num_bound < 1:
            raise ConfigError(f"num_bound must be >= 1, got {self.num_bound}")
        if self.set_bound < self.num_bound:
            raise ConfigError(
                f"set_bound {self.set_bound} must be >= num_bound {self.num_bound}"
            )


@dataclass(frozen=True, eq=False)
class Assignment:
    """A conditional assignment of CondNats to number variables and CondSets to set variables."""

    space: MeasureSpace
    num: Mapping[str, CondNat] = field(default_factory=dict)
    sets: Mapping[str, CondSet] = field(default_factory=dict)

    def __post_init__(self):
        for value in list(self.num.values()) + list(self.sets.values()):
            self.space.check(value.space)
        object.__setattr__(self, "num", MappingProxyType(dict(self.num)))
        object.__setattr__(self, "sets", MappingProxyType(dict(self.sets)))

    def bind_num(self, name: str, value: CondNat) -> "Assignment":
        return Assignment(self.space, {**self.num, name: value}, self.sets)

    def bind_set(self, name: str, value: CondSet) -> "Assignment":
        return Assignment(self.space, self.num, {**self.sets, name: value})

    def at(self, atom: int) -> Tuple[Dict[str, int], Dict[str, Optional[Fiber]]]:
        """The scalar environment of one atom."""
        nums = {name: value.values[atom] for name, value in self.num.items()}
        sets = {name: value.fibers[atom] for name, value in self.sets.items()}
        return nums, sets

    def to_json(self) -> dict:
        return {
            "num": {name: value.to_json() for name, value in sorted(self.num.items())},
            "set": {name: value.to_json() for name, value in sorted(self.sets.items())},
        }

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Assignment)
            and self.space == other.space
            and dict(self.num) == dict(other.num)
            and dict(self.sets) == dict(other.sets)
        )

    def __repr__(self) -> str:
        return f"Assignment(num={dict(self.num)}, sets={dict(self.sets)})"


@dataclass(frozen=True)
class TruthReport:
    """Result of evaluating one formula.

    Attributes:
        formula: Canonical text of the formula.
        event: Its truth value.
        witnesses: Glued witnesses of the leading existential quantifiers, as
            ``(quantifier, witness)`` pairs.
        warnings: Non-fatal notes, e.g. bound overflows.
    """

    formula: str
    event: Event
    witnesses: Tuple[Tuple[str, Union[CondNat, CondSet]], ...] = ()
    warnings: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "formula": self.formula,
            "event": self.event.atoms(),
            "measure": str(self.event.measure()),
            "witnesses": [
                {"quantifier": label, "witness": value.to_json()}
                for label, value in self.witnesses
            ],
            "warnings": list(self.warnings),
        }


def _as_formula(f: FormulaLike) -> Formula:
    return parse(f) if isinstance(f, str) else f


def _check_assigned(f: Formula, beta: Assignment, skip: Sequence[str] = ()) -> None:
    nums, sets = free_vars(f)
    for name in sorted(nums):
        if name not in beta.num and name not in skip:
            raise UnboundVariable(name)
    for name in sorted(sets):
        if name not in beta.sets and name not in skip:
            raise UnboundVariable(name)


@lru_cache(maxsize=None)
def set_domain(set_bound: int) -> Tuple[Fiber, ...]:
    """All finite subsets of ``0..set_bound-1``, indexed by their bit pattern."""
    return tuple(Fiber.from_mask(mask) for mask in range(1 << set_bound))


class LocalModel:
    """Scalar evaluation of desugared formulas at a single atom."""

    def __init__(self, bounds: Bounds):
        self.bounds = bounds
        self.domain = set_domain(bounds.set_bound)
        self.overflows: List[str] = []

    def term(self, t: Term, nums: Mapping[str, int]) -> int:
        if isinstance(t, Zero):
            return 0
        if isinstance(t, One):
            return 1
        if isinstance(t, NumVar):
            return nums[t.name]
        if isinstance(t, Plus):
            return self.term(t.left, nums) + self.term(t.right, nums)
        return self.term(t.left, nums) * self.term(t.right, nums)

    def holds(
        self,
        f: Formula,
        nums: Mapping[str, int],
        sets: Mapping[str, Optional[Fiber]],
        quantified: frozenset = frozenset(),
    ) -> bool:
        if isinstance(f, Eq):
            return self.term(f.left, nums) == self.term(f.right, nums)
        if isinstance(f, Lt):
            return self.term(f.left, nums) < self.term(f.right, nums)
        if isinstance(f, In):
            value = self.term(f.term, nums)
            fiber = sets[f.var]
            if f.var in quantified and value >= self.bounds.set_bound:
                self.overflows.append(
                    f"value {value} tested against quantified {f.var} with set_bound "
                    f"{self.bounds.set_bound}"
                )
            return fiber is not None and value in fiber
        if isinstance(f, Not):
            return not self.holds(f.body, nums, sets, quantified)
        if isinstance(f, And):
            return self.holds(f.left, nums, sets, quantified) and self.holds(
                f.right, nums, sets, quantified
            )
        if isinstance(f, ExistsNum):
            return any(
                self.holds(f.body, {**nums, f.var: v}, sets, quantified)
                for v in range(self.bounds.num_bound)
            )
        if isinstance(f, ExistsSet):
            inner = quantified | {f.var}
            return any(
                self.holds(f.body, nums, {**sets, f.var: fiber}, inner)
                for fiber in self.domain
            )
        raise TypeError(f"formula is not desugared: {f!r}")

    def first_num(self, f: ExistsNum, nums, sets) -> Optional[int]:
        for v in range(self.bounds.num_bound):
            if self.holds(f.body, {**nums, f.var: v}, sets):
                return v
        return None

    def first_set(self, f: ExistsSet, nums, sets) -> Optional[Fiber]:
        for fiber in self.domain:
            if self.holds(f.body, nums, {**sets, f.var: fiber}, frozenset({f.var})):
                return fiber
        return None


def eval_term(t: Term, beta: Assignment) -> CondNat:
    """The beta-evaluation of a term, pointwise on atoms.

    Raises:
        UnboundVariable: If a variable of ``t`` is not assigned.
    """
    for name in sorted(term_vars(t)):
        if name not in beta.num:
            raise UnboundVariable(name)
    if isinstance(t, Zero):
        return CondNat.constant(beta.space, 0)
    if isinstance(t, One):
        return CondNat.constant(beta.space, 1)
    if isinstance(t, NumVar):
        return beta.num[t.name]
    if isinstance(t, Plus):
        return eval_term(t.left, beta) + eval_term(t.right, beta)
    return eval_term(t.left, beta) * eval_term(t.right, beta)


def _flush(model: LocalModel) -> List[str]:
    notes = sorted(set(model.overflows))
    for note in notes:
        warnings.warn(note, BoundTooSmallWarning)
    return notes


def _evaluate(f: Formula, beta: Assignment, bounds: Bounds) -> Tuple[Event, List[str]]:
    _check_assigned(f, beta)
    core = desugar(f)
    model = LocalModel(bounds)
    mask = 0
    for atom in range(beta.space.atom_count):
        nums, sets = beta.at(atom)
        if model.holds(core, nums, sets):
            mask |= 1 << atom
    return Event(beta.space, mask), _flush(model)


def eval_formula(f: FormulaLike, beta: Assignment, bounds: Bounds = Bounds()) -> Event:
    """The conditional truth value ``[f]^beta``.

    Raises:
        UnboundVariable: If a free variable of ``f`` is not assigned.
    """
    return _evaluate(_as_formula(f), beta, bounds)[0]


def witness_exists(
    f: FormulaLike, beta: Assignment, bounds: Bounds = Bounds()
) -> Tuple[Union[CondNat, CondSet], Event]:
    """A single glued witness for an existential formula (maximum principle).

    Per atom the smallest witness is chosen (numbers by value, sets by bit
    pattern); atoms where no witness exists get 0, respectively fall outside
    the carrier. The returned event equals ``[f]^beta``.

    Raises:
        NotExistential: If ``f`` is not of the form ``exists x. φ`` or ``exists X. φ``.
    """
    witness, event, _ = _witness(_as_formula(f), beta, bounds)
    return witness, event


def _witness(
    f: Formula, beta: Assignment, bounds: Bounds
) -> Tuple[Union[CondNat, CondSet], Event, List[str]]:
    if not isinstance(f, (ExistsNum, ExistsSet)):
        raise NotExistential(f"not an existential formula: {format_formula(f)}")
    _check_assigned(f, beta)
    core = desugar(f)
    model = LocalModel(bounds)
    space = beta.space
    found = []
    for atom in range(space.atom_count):
        nums, sets = beta.at(atom)
        if isinstance(core, ExistsNum):
            found.append(model.first_num(core, nums, sets))
        else:
            found.append(model.first_set(core, nums, sets))
    event = Event(space, sum(1 << a for a, w in enumerate(found) if w is not None))
    if isinstance(core, ExistsNum):
        witness = CondNat(space, tuple(0 if w is None else w for w in found))
    else:
        fibers = [None if w is None or w.is_empty() else w for w in found]
        carrier = Event(space, sum(1 << a for a, w in enumerate(fibers) if w is not None))
        witness = make_stable(fibers, carrier)
    logger.debug("witness for %s: %r on %r", format_formula(f), witness, event)
    return witness, event, _flush(model)


def evaluate_report(
    f: FormulaLike, beta: Assignment, bounds: Bounds = Bounds()
) -> TruthReport:
    """Evaluate ``f`` and trace glued witnesses through its leading existential prefix."""
    f = _as_formula(f)
    event, notes = _evaluate(f, beta, bounds)
    trace = []
    notes = list(notes)
    current, scope = f, beta
    while isinstance(current, (ExistsNum, ExistsSet)):
        witness, _, found = _witness(current, scope, bounds)
        notes += [note for note in found if note not in notes]
        trace.append((f"exists {current.var}", witness))
        if isinstance(current, ExistsNum):
            scope = scope.bind_num(current.var, witness)
        else:
            scope = scope.bind_set(current.var, witness)
        current = current.body
    return TruthReport(format_formula(f), event, tuple(trace), tuple(notes))


def comprehend(
    phi: FormulaLike,
    var: str,
    beta: Assignment,
    bounds: Bounds = Bounds(),
    set_var: str = "X",
) -> CondSet:
    """The set ``{x : phi(x)}`` given by arithmetical comprehension.

    The carrier is the event where ``phi`` has some instance below the bound;
    at each carrier atom the fiber is ``{v < B : phi(v)}``. The result is
    checked against ``forall x. (x in X <-> phi(x))``.

    Raises:
        NotArithmetical: If ``phi`` contains a set quantifier.
        FreeSetVariableClash: If ``set_var`` occurs free in ``phi``.
        AxiomFailure: If the comprehension instance does not evaluate to the full event.
    """
    phi = _as_formula(phi)
    if not is_arithmetical(phi):
        raise NotArithmetical(f"formula has set quantifiers: {format_formula(phi)}")
    if set_var in free_vars(phi)[1]:
        raise FreeSetVariableClash(f"{set_var} occurs free in {format_formula(phi)}")
    _check_assigned(phi, beta, skip=(var,))
    core = desugar(phi)
    model = LocalModel(bounds)
    fibers = []
    for atom in range(beta.space.atom_count):
        nums, sets = beta.at(atom)
        fibers.append(
            Fiber.finite(
                v for v in range(bounds.num_bound) if model.holds(core, {**nums, var: v}, sets)
            )
        )
    carrier = Event(
        beta.space, sum(1 << a for a, fiber in enumerate(fibers) if not fiber.is_empty())
    )
    result = make_stable(fibers, carrier)
    instance = ForallNum(var, Iff(In(NumVar(var), set_var), phi))
    event = eval_formula(instance, beta.bind_set(set_var, result), bounds)
    if not event.is_full():
        raise AxiomFailure(format_formula(instance), beta, event)
    return result


def sequent_validity(
    gamma: Sequence[FormulaLike],
    delta: Sequence[FormulaLike],
    beta: Assignment,
    bounds: Bounds = Bounds(),
) -> Event:
    """``(∪_{ψ∈Γ} [¬ψ]) ∪ (∪_{ψ∈Δ} [ψ])``."""
    events = [~eval_formula(psi, beta, bounds) for psi in gamma]
    events += [eval_formula(psi, beta, bounds) for psi in delta]
    return join_all(beta.space, events)


def is_correct(
    gamma: Sequence[FormulaLike],
    delta: Sequence[FormulaLike],
    assignments: Sequence[Assignment],
    bounds: Bounds = Bounds(),
) -> bool:
    """True iff the sequent is valid with the full event under every given assignment."""
    return all(sequent_validity(gamma, delta, beta, bounds).is_full() for beta in assignments)


def glued_numbers(space: MeasureSpace, bound: int):
    """Every CondNat with values below ``bound``."""
    for values in itertools.product(range(bound), repeat=space.atom_count):
        yield CondNat(space, values)


def glued_sets(space: MeasureSpace, set_bound: int):
    """Every CondSet whose fibers are subsets of ``0..set_bound-1``."""
    domain = set_domain(set_bound)
    for choice in itertools.product(domain, repeat=space.atom_count):
        fibers = [None if fiber.is_empty() else fiber for fiber in choice]
        carrier = Event(space, sum(1 << a for a, f in enumerate(fibers) if f is not None))
        yield make_stable(fibers, carrier)


def eval_formula_glued(f: FormulaLike, beta: Assignment, bounds: Bounds = Bounds()) -> Event:
    """Evaluate by joining over all glued conditional objects in the bounded domains.

    Exponential in the number of atoms; used to certify the per-atom evaluation.
    """
    f = _as_formula(f)
    _check_assigned(f, beta)
    return _glued(desugar(f), beta, bounds)


def _glued(f: Formula, beta: Assignment, bounds: Bounds) -> Event:
    if isinstance(f, Eq):
        return agree(eval_term(f.left, beta), eval_term(f.right, beta))
    if isinstance(f, Lt):
        return compare(eval_term(f.left, beta), eval_term(f.right, beta))[0]
    if isinstance(f, In):
        return member(eval_term(f.term, beta), beta.sets[f.var])
    if isinstance(f, Not):
        return ~_glued(f.body, beta, bounds)
    if isinstance(f, And):
        return _glued(f.left, beta, bounds) & _glued(f.right, beta, bounds)
    space = beta.space
    if isinstance(f, ExistsNum):
        return join_all(
            space,
            (
                _glued(f.body, beta.bind_num(f.var, n), bounds)
                for n in glued_numbers(space, bounds.num_bound)
            ),
        )
    return join_all(
        space,
        (
            _glued(f.body, beta.bind_set(f.var, s), bounds)
            for s in glued_sets(space, bounds.set_bound)
        ),
    )
