"""Correctness checking for the rules of second-order sequent calculus.

A rule instance is correct when its conclusion is valid with the full event
whenever its premises are. ``check_rule`` samples assignments and looks for a
trial in which every premise is valid and the conclusion is not. When the
premises hold on some atoms only, the trial is conditioned on that event:
evaluation is atom-local, so the space cut down to those atoms is a space on
which the premises are valid.

Eigenvariable rules (right universal, left existential) are checked the way
their correctness argument goes: a premise counts as valid under an assignment
only if it is valid under every variant of the assignment at the eigenvariable.
Instantiation rules (left universal, right existential) are only asserted when
the instantiated term or set lies inside the bounded quantifier domain.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .errors import EigenvariableViolation, UnknownRule
from .evaluator import Assignment, Bounds, FormulaLike, eval_term, sequent_validity, set_domain
from .measure import Event, MeasureSpace, make_space, meet_all
from .sampling import Sampler
from .sets import CondSet, make_stable
from .syntax import (
    And,
    ExistsNum,
    ExistsSet,
    ForallNum,
    ForallSet,
    Formula,
    Not,
    NumVar,
    Term,
    format_formula,
    free_vars,
    parse,
    parse_term,
    substitute,
    substitute_set,
)
from .values import CondNat

logger = logging.getLogger(__name__)


def _formulas(items: Sequence[FormulaLike]) -> Tuple[Formula, ...]:
    return tuple(parse(f) if isinstance(f, str) else f for f in items)


@dataclass(frozen=True)
class Sequent:
    """``Γ → Δ``."""

    antecedent: Tuple[Formula, ...] = ()
    succedent: Tuple[Formula, ...] = ()

    @classmethod
    def of(cls, antecedent: Sequence[FormulaLike] = (), succedent: Sequence[FormulaLike] = ()) -> "Sequent":
        return cls(_formulas(antecedent), _formulas(succedent))

    def free_vars(self) -> Tuple[frozenset, frozenset]:
        nums, sets = set(), set()
        for f in self.antecedent + self.succedent:
            f_nums, f_sets = free_vars(f)
            nums |= f_nums
            sets |= f_sets
        return frozenset(nums), frozenset(sets)

    def validity(self, beta: Assignment, bounds: Bounds) -> Event:
        return sequent_validity(self.antecedent, self.succedent, beta, bounds)

    def __str__(self) -> str:
        left = ", ".join(format_formula(f) for f in self.antecedent)
        right = ", ".join(format_formula(f) for f in self.succedent)
        return f"{left} => {right}".strip()


@dataclass(frozen=True)
class Instantiation:
    """The term or set variable a quantifier rule instantiates with."""

    kind: str
    term: Optional[Term] = None
    set_var: Optional[str] = None


@dataclass(frozen=True)
class RuleInstance:
    """One application of an inference rule.

    Attributes:
        name: Registry name of the rule.
        premises: The upper sequents.
        conclusion: The lower sequent.
        eigenvariable: ``("num", y)`` or ``("set", Y)`` for rules with an
            eigenvariable condition.
        instantiation: The term or set used by an instantiation rule.
    """

    name: str
    premises: Tuple[Sequent, ...]
    conclusion: Sequent
    eigenvariable: Optional[Tuple[str, str]] = None
    instantiation: Optional[Instantiation] = None

    def violation(self) -> Optional[str]:
        """Describe a broken eigenvariable condition, if any."""
        if self.eigenvariable is None:
            return None
        kind, name = self.eigenvariable
        nums, sets = self.conclusion.free_vars()
        if name in (nums if kind == "num" else sets):
            return f"eigenvariable {name} occurs free in the conclusion {self.conclusion}"
        return None

    def variables(self) -> Tuple[frozenset, frozenset]:
        nums, sets = set(self.conclusion.free_vars()[0]), set(self.conclusion.free_vars()[1])
        for premise in self.premises:
            p_nums, p_sets = premise.free_vars()
            nums |= p_nums
            sets |= p_sets
        if self.instantiation is not None and self.instantiation.set_var:
            sets.add(self.instantiation.set_var)
        return frozenset(nums), frozenset(sets)


# rule builders


def weakening_left(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "weakening_left",
        (Sequent.of(gamma, delta),),
        Sequent((phi,) + _formulas(gamma), _formulas(delta)),
    )


def weakening_right(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "weakening_right",
        (Sequent.of(gamma, delta),),
        Sequent(_formulas(gamma), _formulas(delta) + (phi,)),
    )


def contraction_left(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "contraction_left",
        (Sequent((phi, phi) + _formulas(gamma), _formulas(delta)),),
        Sequent((phi,) + _formulas(gamma), _formulas(delta)),
    )


def contraction_right(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "contraction_right",
        (Sequent(_formulas(gamma), _formulas(delta) + (phi, phi)),),
        Sequent(_formulas(gamma), _formulas(delta) + (phi,)),
    )


def exchange_left(gamma, delta, phi, psi) -> RuleInstance:
    phi, psi = _formulas([phi, psi])
    return RuleInstance(
        "exchange_left",
        (Sequent(_formulas(gamma) + (phi, psi), _formulas(delta)),),
        Sequent(_formulas(gamma) + (psi, phi), _formulas(delta)),
    )


def cut(gamma, delta, phi, pi=(), lam=()) -> RuleInstance:
    (phi,) = _formulas([phi])
    gamma, delta, pi, lam = (_formulas(x) for x in (gamma, delta, pi, lam))
    return RuleInstance(
        "cut",
        (Sequent(gamma, delta + (phi,)), Sequent((phi,) + pi, lam)),
        Sequent(gamma + pi, delta + lam),
    )


def not_left(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "not_left",
        (Sequent(_formulas(gamma), _formulas(delta) + (phi,)),),
        Sequent((Not(phi),) + _formulas(gamma), _formulas(delta)),
    )


def not_right(gamma, delta, phi) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "not_right",
        (Sequent((phi,) + _formulas(gamma), _formulas(delta)),),
        Sequent(_formulas(gamma), _formulas(delta) + (Not(phi),)),
    )


def and_left(gamma, delta, phi, psi) -> RuleInstance:
    phi, psi = _formulas([phi, psi])
    return RuleInstance(
        "and_left",
        (Sequent((phi,) + _formulas(gamma), _formulas(delta)),),
        Sequent((And(phi, psi),) + _formulas(gamma), _formulas(delta)),
    )


def and_right(gamma, delta, phi, psi) -> RuleInstance:
    phi, psi = _formulas([phi, psi])
    gamma, delta = _formulas(gamma), _formulas(delta)
    return RuleInstance(
        "and_right",
        (Sequent(gamma, delta + (phi,)), Sequent(gamma, delta + (psi,))),
        Sequent(gamma, delta + (And(phi, psi),)),
    )


def _term(t: Union[Term, str]) -> Term:
    return parse_term(t) if isinstance(t, str) else t


def forall_left(gamma, delta, var: str, phi, term) -> RuleInstance:
    (phi,) = _formulas([phi])
    term = _term(term)
    return RuleInstance(
        "forall_left",
        (Sequent((substitute(phi, var, term),) + _formulas(gamma), _formulas(delta)),),
        Sequent((ForallNum(var, phi),) + _formulas(gamma), _formulas(delta)),
        instantiation=Instantiation("num", term=term),
    )


def forall_right(gamma, delta, var: str, phi, eigen: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "forall_right",
        (Sequent(_formulas(gamma), _formulas(delta) + (substitute(phi, var, NumVar(eigen)),)),),
        Sequent(_formulas(gamma), _formulas(delta) + (ForallNum(var, phi),)),
        eigenvariable=("num", eigen),
    )


def exists_left(gamma, delta, var: str, phi, eigen: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "exists_left",
        (Sequent((substitute(phi, var, NumVar(eigen)),) + _formulas(gamma), _formulas(delta)),),
        Sequent((ExistsNum(var, phi),) + _formulas(gamma), _formulas(delta)),
        eigenvariable=("num", eigen),
    )


def exists_right(gamma, delta, var: str, phi, term) -> RuleInstance:
    (phi,) = _formulas([phi])
    term = _term(term)
    return RuleInstance(
        "exists_right",
        (Sequent(_formulas(gamma), _formulas(delta) + (substitute(phi, var, term),)),),
        Sequent(_formulas(gamma), _formulas(delta) + (ExistsNum(var, phi),)),
        instantiation=Instantiation("num", term=term),
    )


def forall_set_left(gamma, delta, var: str, phi, set_var: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "forall_set_left",
        (Sequent((substitute_set(phi, var, set_var),) + _formulas(gamma), _formulas(delta)),),
        Sequent((ForallSet(var, phi),) + _formulas(gamma), _formulas(delta)),
        instantiation=Instantiation("set", set_var=set_var),
    )


def forall_set_right(gamma, delta, var: str, phi, eigen: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "forall_set_right",
        (Sequent(_formulas(gamma), _formulas(delta) + (substitute_set(phi, var, eigen),)),),
        Sequent(_formulas(gamma), _formulas(delta) + (ForallSet(var, phi),)),
        eigenvariable=("set", eigen),
    )


def exists_set_left(gamma, delta, var: str, phi, eigen: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "exists_set_left",
        (Sequent((substitute_set(phi, var, eigen),) + _formulas(gamma), _formulas(delta)),),
        Sequent((ExistsSet(var, phi),) + _formulas(gamma), _formulas(delta)),
        eigenvariable=("set", eigen),
    )


def exists_set_right(gamma, delta, var: str, phi, set_var: str) -> RuleInstance:
    (phi,) = _formulas([phi])
    return RuleInstance(
        "exists_set_right",
        (Sequent(_formulas(gamma), _formulas(delta) + (substitute_set(phi, var, set_var),)),),
        Sequent(_formulas(gamma), _formulas(delta) + (ExistsSet(var, phi),)),
        instantiation=Instantiation("set", set_var=set_var),
    )


RULES: Dict[str, Callable[..., RuleInstance]] = {
    builder.__name__: builder
    for builder in (
        weakening_left,
        weakening_right,
        contraction_left,
        contraction_right,
        exchange_left,
        cut,
        not_left,
        not_right,
        and_left,
        and_right,
        forall_left,
        forall_right,
        exists_left,
        exists_right,
        forall_set_left,
        forall_set_right,
        exists_set_left,
        exists_set_right,
    )
}


def build_rule(name: str, **kwargs) -> RuleInstance:
    """Instantiate a rule from the registry by name.

    Raises:
        UnknownRule: If ``name`` is not a registered rule.
    """
    try:
        builder = RULES[name]
    except KeyError:
        raise UnknownRule(f"unknown rule {name!r}; known rules: {sorted(RULES)}")
    return builder(**kwargs)


# checking


@dataclass
class RuleReport:
    """Outcome of ``check_rule``.

    Attributes:
        rule: Rule name.
        status: ``"passed"``, ``"counterexample"`` or ``"eigenvariable-violation"``.
        trials: Number of sampled assignments.
        checked: Trials in which the conclusion was asserted, on the atoms where every
            premise was valid.
        conditioned: Checked trials whose premises held on a proper subevent only.
        vacuous: Trials in which no atom satisfied every premise.
        out_of_range: Trials skipped because the instantiation left the bounded domain.
        counterexamples: Assignments under which the premises held and the conclusion did not.
    """

    rule: str
    status: str = "passed"
    trials: int = 0
    checked: int = 0
    conditioned: int = 0
    vacuous: int = 0
    out_of_range: int = 0
    counterexamples: List[dict] = field(default_factory=list)
    message: str = ""

    def merge(self, other: "RuleReport") -> None:
        self.trials += other.trials
        self.checked += other.checked
        self.conditioned += other.conditioned
        self.vacuous += other.vacuous
        self.out_of_range += other.out_of_range
        self.counterexamples.extend(other.counterexamples)
        if other.status != "passed" and self.status == "passed":
            self.status = other.status
            self.message = other.message

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "status": self.status,
            "trials": self.trials,
            "checked": self.checked,
            "conditioned": self.conditioned,
            "vacuous": self.vacuous,
            "out_of_range": self.out_of_range,
            "counterexamples": self.counterexamples,
            "message": self.message,
        }


def _variants(rule: RuleInstance, beta: Assignment, bounds: Bounds) -> List[Assignment]:
    """Assignments differing from ``beta`` at most at the eigenvariable, within the bounds."""
    if rule.eigenvariable is None:
        return [beta]
    kind, name = rule.eigenvariable
    space = beta.space
    if kind == "num":
        return [beta.bind_num(name, CondNat.constant(space, c)) for c in range(bounds.num_bound)]
    variants = []
    for fiber in set_domain(bounds.set_bound):
        if fiber.is_empty():
            variants.append(beta.bind_set(name, make_stable([None] * space.atom_count, space.empty())))
        else:
            variants.append(beta.bind_set(name, make_stable([fiber] * space.atom_count, space.full())))
    return variants


def _in_domain(rule: RuleInstance, beta: Assignment, bounds: Bounds) -> bool:
    inst = rule.instantiation
    if inst is None:
        return True
    if inst.kind == "num":
        return all(v < bounds.num_bound for v in eval_term(inst.term, beta).values)
    fibers = beta.sets[inst.set_var].fibers
    return all(
        f is None or (f.is_finite() and all(n < bounds.set_bound for n in f.elems))
        for f in fibers
    )


def _premise_event(rule: RuleInstance, beta: Assignment, bounds: Bounds) -> Event:
    """Atoms on which every premise is valid under every eigenvariable variant."""
    variants = _variants(rule, beta, bounds)
    return meet_all(
        beta.space,
        (premise.validity(v, bounds) for premise in rule.premises for v in variants),
    )


def condition(beta: Assignment, event: Event) -> Assignment:
    """Cut ``beta`` down to the space made of the atoms of ``event``.

    Atoms keep their weights and their values; atom ``j`` of the new space is
    the ``j``-th atom of ``event``.
    """
    atoms = event.atoms()
    if not atoms:
        raise ValueError("cannot condition on the empty event")
    sub = make_space([beta.space.weights[a] for a in atoms])
    num = {name: CondNat(sub, tuple(v.values[a] for a in atoms)) for name, v in beta.num.items()}
    sets = {
        name: make_stable(
            [s.fibers[a] for a in atoms],
            sub.event(j for j, a in enumerate(atoms) if s.fibers[a] is not None),
        )
        for name, s in beta.sets.items()
    }
    return Assignment(sub, num, sets)


def check_rule(
    rule: RuleInstance,
    sampler: Sampler,
    trials: int,
    bounds: Bounds = Bounds(),
    space: Optional[MeasureSpace] = None,
    max_atoms: int = 3,
    progress: bool = False,
) -> RuleReport:
    """Check one rule instance against ``trials`` sampled assignments.

    Args:
        rule: The rule instance.
        sampler: Source of spaces and assignments.
        trials: Number of assignments to sample.
        bounds: Quantifier bounds.
        space: Fixed space; if omitted a random space with at most
            ``max_atoms`` atoms is drawn per trial.
        progress: Show a tqdm progress bar.

    Returns:
        RuleReport: With status ``"eigenvariable-violation"`` (and no trials)
        if the side condition fails, otherwise the trial statistics.
    """
    report = RuleReport(rule.name)
    problem = rule.violation()
    if problem:
        report.status = "eigenvariable-violation"
        report.message = problem
        logger.debug("not asserting %s: %s", rule.name, problem)
        return report
    nums, sets = rule.variables()
    if rule.eigenvariable is not None:
        kind, name = rule.eigenvariable
        nums = nums - {name} if kind == "num" else nums
        sets = sets - {name} if kind == "set" else sets
    for _ in tqdm(range(trials), desc=rule.name, disable=not progress):
        trial_space = space if space is not None else sampler.space(max_atoms)
        beta = sampler.assignment(trial_space, nums, sets)
        report.trials += 1
        if not _in_domain(rule, beta, bounds):
            report.out_of_range += 1
            continue
        premises = _premise_event(rule, beta, bounds)
        if premises.is_empty():
            report.vacuous += 1
            continue
        if not premises.is_full():
            report.conditioned += 1
            beta = condition(beta, premises)
        report.checked += 1
        event = rule.conclusion.validity(beta, bounds)
        if not event.is_full():
            report.status = "counterexample"
            report.counterexamples.append(
                {
                    "conclusion": str(rule.conclusion),
                    "space": beta.space.to_json(),
                    "assignment": beta.to_json(),
                    "event": event.atoms(),
                }
            )
    return report


def require_side_conditions(rule: RuleInstance) -> RuleInstance:
    """Return ``rule`` unchanged, or raise if its eigenvariable condition fails."""
    problem = rule.violation()
    if problem:
        raise EigenvariableViolation(problem)
    return rule


# random instances

_GAMMA_VARS = ("y", "z")
_PHI_VARS = ("x", "y")
_EIGEN_NUM = "e"
_EIGEN_SET = "E"


def _side(sampler: Sampler, size: int) -> List[Formula]:
    return [
        sampler.formula(_GAMMA_VARS, ("Y",), depth=2, quantifier_depth=1)
        for _ in range(size)
    ]


def sample_rule(name: str, sampler: Sampler) -> RuleInstance:
    """A random instance of the named rule whose side conditions hold.

    Side formulas are drawn over ``y, z, Y`` and the principal formula over
    ``x, y``, so the eigenvariables ``e``/``E`` never occur in the conclusion.
    """
    if name not in RULES:
        raise UnknownRule(f"unknown rule {name!r}")
    gamma = _side(sampler, int(sampler.rng.integers(0, 2)))
    delta = _side(sampler, int(sampler.rng.integers(0, 2)))
    phi = sampler.formula(_PHI_VARS, ("Y",), depth=2, quantifier_depth=1)
    psi = sampler.formula(_GAMMA_VARS, ("Y",), depth=2, quantifier_depth=1)
    if name in ("weakening_left", "weakening_right", "contraction_left", "contraction_right",
                "not_left", "not_right"):
        return RULES[name](gamma, delta, phi)
    if name in ("exchange_left", "and_left", "and_right"):
        return RULES[name](gamma, delta, phi, psi)
    if name == "cut":
        return cut(gamma, delta, phi, _side(sampler, 1), _side(sampler, int(sampler.rng.integers(0, 2))))
    if name in ("forall_left", "exists_right"):
        return RULES[name](gamma, delta, "x", phi, sampler.term(_GAMMA_VARS, depth=1))
    if name in ("forall_right", "exists_left"):
        return RULES[name](gamma, delta, "x", phi, _EIGEN_NUM)
    set_phi = sampler.formula(_GAMMA_VARS, ("X", "Y"), depth=2, quantifier_depth=1)
    if name in ("forall_set_left", "exists_set_right"):
        return RULES[name](gamma, delta, "X", set_phi, "Y")
    return RULES[name](gamma, delta, "X", set_phi, _EIGEN_SET)
