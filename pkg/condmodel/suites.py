"""Randomized and exhaustive check suites.

``axiom_suite`` evaluates the axioms of arithmetic with comprehension and
induction under sampled assignments and requires the full event.
``boolean_laws`` checks the Boolean-algebra laws of events and of conditional
sets exhaustively on small spaces. ``rule_suite`` runs ``check_rule`` over
random instances of every rule.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from tqdm import tqdm

from .errors import AxiomFailure
from .evaluator import Assignment, Bounds, comprehend, eval_formula
from .measure import Event, MeasureSpace, Partition, make_space
from .rules import RULES, RuleReport, check_rule, sample_rule
from .sampling import Sampler
from .sets import (
    CondSet,
    Fiber,
    bottom,
    cond_complement,
    cond_intersect,
    cond_union,
    full_set,
    includes,
    make_stable,
    member,
)
from .syntax import parse
from .values import CondNat, concat_values

logger = logging.getLogger(__name__)

BASIC_AXIOMS = (
    "!(x + 1 = 0)",
    "x + 1 = y + 1 -> x = y",
    "x + 0 = x",
    "x + (y + 1) = (x + y) + 1",
    "x * 0 = 0",
    "x * (y + 1) = (x * y) + x",
    "!(x < 0)",
    "x < y + 1 <-> (x < y | x = y)",
)

INDUCTION_CLOSED = "forall X. ((0 in X & forall x. (x in X -> x + 1 in X)) -> forall x. x in X)"
INDUCTION_OPEN = "(0 in X & forall x. (x in X -> x + 1 in X)) -> forall x. x in X"

COMPREHENSION_CORPUS = (
    "x < y",
    "x = x + 1",
    "exists z. z + z = x",
    "x in Y",
    "!(x in Y) & x < y + 1",
    "exists z. x = z * z",
    "x + y = y + x",
    "forall z. (z < x -> z in Y)",
    "x * y < 3",
    "exists z. (z < x & z in Y)",
)


@dataclass
class SuiteReport:
    """Outcome of one suite.

    Attributes:
        suite: Suite name.
        passed: Whether every check held.
        checks: Number of checks per law, axiom or rule.
        failures: Description of every failed check.
        rules: Per-rule reports of the rule suite.
    """

    suite: str
    passed: bool = True
    checks: Dict[str, int] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)
    rules: List[RuleReport] = field(default_factory=list)

    def count(self, name: str, n: int = 1) -> None:
        self.checks[name] = self.checks.get(name, 0) + n

    def fail(self, name: str, **detail) -> None:
        self.passed = False
        self.failures.append({"law": name, **detail})

    def to_json(self) -> dict:
        data = {
            "suite": self.suite,
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "failures": self.failures,
        }
        if self.rules:
            data["rules"] = [r.to_json() for r in self.rules]
        return data


def _require_full(axiom: str, beta: Assignment, bounds: Bounds, report: SuiteReport) -> None:
    event = eval_formula(axiom, beta, bounds)
    if not event.is_full():
        raise AxiomFailure(axiom, beta, event)
    report.count(axiom)


def axiom_suite(
    space: Optional[MeasureSpace],
    bounds: Bounds,
    sampler: Sampler,
    trials: int,
    spaces: int = 1,
    progress: bool = True,
) -> SuiteReport:
    """Check every axiom for ``trials`` sampled assignments on each space.

    Args:
        space: The space to use, or ``None`` to draw ``spaces`` random spaces.
        bounds: Quantifier bounds; the induction axioms use a set bound of at
            least ``num_bound + 1`` so the successor of every number is in range.
        sampler: Source of spaces and assignments.
        trials: Assignments per space.
        spaces: Number of random spaces when ``space`` is ``None``.
        progress: Show a tqdm progress bar.

    Raises:
        AxiomFailure: At the first axiom whose value is not the full event.
    """
    report = SuiteReport("axioms")
    induction_bounds = Bounds(bounds.num_bound, max(bounds.set_bound, bounds.num_bound + 1))
    axioms = [parse(a) for a in BASIC_AXIOMS]
    spaces_to_check = [space] if space is not None else [sampler.space() for _ in range(spaces)]
    for current in spaces_to_check:
        logger.debug("checking axioms on %d atoms", current.atom_count)
        _require_full(INDUCTION_CLOSED, Assignment(current), induction_bounds, report)
        for _ in tqdm(range(trials), desc="axioms", disable=not progress):
            beta = sampler.assignment(current, ("x", "y"), ("X", "Y"))
            for text, axiom in zip(BASIC_AXIOMS, axioms):
                event = eval_formula(axiom, beta, bounds)
                if not event.is_full():
                    raise AxiomFailure(text, beta, event)
                report.count(text)
            _require_full(INDUCTION_OPEN, beta, induction_bounds, report)
            for phi in COMPREHENSION_CORPUS:
                comprehend(phi, "x", beta, bounds)
                report.count(f"comprehension: {phi}")
    return report


# Boolean laws


def _check(report: SuiteReport, name: str, ok: bool, **detail) -> None:
    report.count(name)
    if not ok:
        report.fail(name, **detail)


def _uniform_space(k: int) -> MeasureSpace:
    return make_space([Fraction(1, k)] * k)


def measure_laws(report: SuiteReport, max_atoms: int = 5, triple_atoms: int = 3) -> None:
    """Boolean-algebra and additivity laws over all events of spaces with up to ``max_atoms`` atoms."""
    for k in range(1, max_atoms + 1):
        space = _uniform_space(k)
        events = list(space.events())
        full, empty = space.full(), space.empty()
        for x in events:
            _check(report, "double complement", ~~x == x, atoms=k, x=x.atoms())
            _check(report, "excluded middle", (x | ~x) == full and (x & ~x) == empty, atoms=k, x=x.atoms())
        for x, y in itertools.product(events, repeat=2):
            detail = dict(atoms=k, x=x.atoms(), y=y.atoms())
            _check(report, "commutativity", (x & y) == (y & x) and (x | y) == (y | x), **detail)
            _check(report, "absorption", (x & (x | y)) == x and (x | (x & y)) == x, **detail)
            _check(report, "de morgan", ~(x & y) == (~x | ~y) and ~(x | y) == (~x & ~y), **detail)
            _check(
                report,
                "additivity",
                (x | y).measure() + (x & y).measure() == x.measure() + y.measure(),
                **detail,
            )
        if k > triple_atoms:
            continue
        for x, y, z in itertools.product(events, repeat=3):
            detail = dict(atoms=k, x=x.atoms(), y=y.atoms(), z=z.atoms())
            _check(report, "associativity", ((x & y) & z) == (x & (y & z)) and ((x | y) | z) == (x | (y | z)), **detail)
            _check(report, "distributivity", (x & (y | z)) == ((x & y) | (x & z)), **detail)


def fiber_pool(universe: int = 4, cofinite: bool = True) -> List[Optional[Fiber]]:
    """``None`` plus every nonempty finite subset of ``0..universe-1``, and optionally their cofinite complements."""
    finite = [Fiber.from_mask(mask) for mask in range(1, 1 << universe)]
    pool: List[Optional[Fiber]] = [None] + finite
    if cofinite:
        pool += [Fiber.cofinite_of(Fiber.from_mask(mask).elems) for mask in range(1 << universe)]
    return pool


def all_sets(space: MeasureSpace, pool: Sequence[Optional[Fiber]]) -> Iterable[CondSet]:
    for fibers in itertools.product(pool, repeat=space.atom_count):
        carrier = Event(space, sum(1 << a for a, f in enumerate(fibers) if f is not None))
        yield make_stable(list(fibers), carrier)


def _single_laws(report: SuiteReport, n: CondSet) -> None:
    space = n.space
    comp = cond_complement(n)
    detail = dict(n=n.to_json())
    _check(report, "set double complement", cond_complement(comp) == n, **detail)
    _check(report, "set excluded middle", cond_union(n, comp) == full_set(space), **detail)
    _check(report, "set contradiction", cond_intersect(n, comp) == bottom(space), **detail)
    _check(report, "set idempotence", cond_intersect(n, n) == n and cond_union(n, n) == n, **detail)


def _pair_laws(report: SuiteReport, n: CondSet, m: CondSet, elements: Sequence[CondNat]) -> None:
    detail = dict(n=n.to_json(), m=m.to_json())
    meet, join = cond_intersect(n, m), cond_union(n, m)
    _check(report, "set commutativity", meet == cond_intersect(m, n) and join == cond_union(m, n), **detail)
    _check(
        report,
        "set absorption",
        cond_intersect(n, join) == n and cond_union(n, meet) == n,
        **detail,
    )
    _check(
        report,
        "set de morgan",
        cond_complement(meet) == cond_union(cond_complement(n), cond_complement(m))
        and cond_complement(join) == cond_intersect(cond_complement(n), cond_complement(m)),
        **detail,
    )
    _check(report, "set inclusion order", includes(meet, n) and includes(n, join), **detail)
    _check(report, "set inclusion meet", includes(n, m) == (meet == n), **detail)
    if includes(n, m):
        _check(
            report,
            "membership monotone",
            all(member(p, n).is_subset(member(p, m)) for p in elements),
            **detail,
        )


def _triple_laws(report: SuiteReport, n: CondSet, m: CondSet, l: CondSet) -> None:
    detail = dict(n=n.to_json(), m=m.to_json(), l=l.to_json())
    _check(
        report,
        "set associativity",
        cond_intersect(cond_intersect(n, m), l) == cond_intersect(n, cond_intersect(m, l))
        and cond_union(cond_union(n, m), l) == cond_union(n, cond_union(m, l)),
        **detail,
    )
    _check(
        report,
        "set distributivity",
        cond_intersect(n, cond_union(m, l)) == cond_union(cond_intersect(n, m), cond_intersect(n, l)),
        **detail,
    )


def _gluing(report: SuiteReport, n_set: CondSet, ns: Sequence[CondNat], partition: Partition) -> None:
    glued = concat_values(ns, partition)
    expected = partition.space.empty()
    for n, piece in zip(ns, partition.pieces):
        expected = expected | (member(n, n_set) & piece)
    _check(
        report,
        "gluing identity",
        member(glued, n_set) == expected,
        n=n_set.to_json(),
        values=[n.to_json() for n in ns],
        pieces=[p.atoms() for p in partition.pieces],
    )


def set_laws(report: SuiteReport, sampler: Sampler, gluing_trials: int = 1000, progress: bool = False) -> None:
    """Conditional-set laws: triples on one atom, finite-fibered pairs on two, singles on three.

    The laws are atom-local, so a failure on a larger space shows up on one of
    these. The gluing identity is checked exhaustively on one atom and by
    sampling on up to three.
    """
    pool = fiber_pool()
    one = _uniform_space(1)
    one_sets = list(all_sets(one, pool))
    elements_one = [CondNat(one, (v,)) for v in range(6)]
    for n, m in itertools.product(one_sets, repeat=2):
        _pair_laws(report, n, m, elements_one)
    for n, m, l in tqdm(list(itertools.product(one_sets, repeat=3)), desc="set triples", disable=not progress):
        _triple_laws(report, n, m, l)
    two = _uniform_space(2)
    two_sets = list(all_sets(two, fiber_pool(cofinite=False)))
    elements_two = [CondNat(two, values) for values in itertools.product(range(5), repeat=2)]
    for n, m in tqdm(list(itertools.product(two_sets, repeat=2)), desc="set pairs", disable=not progress):
        _pair_laws(report, n, m, elements_two)
    for k in (1, 2, 3):
        for n in all_sets(_uniform_space(k), pool):
            _single_laws(report, n)
    halves = [
        Partition(one, (one.full(), one.empty())),
        Partition(one, (one.empty(), one.full())),
    ]
    for n_set in one_sets:
        for a, b in itertools.product(range(5), repeat=2):
            for partition in halves:
                _gluing(report, n_set, [CondNat(one, (a,)), CondNat(one, (b,))], partition)
    for _ in range(gluing_trials):
        space = sampler.space(max_atoms=3)
        pieces = int(sampler.rng.integers(1, 4))
        partition = sampler.partition(space, pieces)
        ns = [sampler.cond_nat(space) for _ in range(pieces)]
        _gluing(report, sampler.cond_set(space), ns, partition)


def boolean_laws(sampler: Sampler, max_atoms: int = 5, gluing_trials: int = 1000, progress: bool = True) -> SuiteReport:
    """Run the event and conditional-set law checks; failures are collected, not raised."""
    report = SuiteReport("boolean-laws")
    measure_laws(report, max_atoms)
    set_laws(report, sampler, gluing_trials, progress)
    logger.debug("boolean laws: %d checks, %d failures", sum(report.checks.values()), len(report.failures))
    return report


def rule_suite(
    sampler: Sampler,
    trials: int,
    bounds: Bounds = Bounds(),
    rules: Optional[Sequence[str]] = None,
    per_instance: int = 5,
    max_draws: int = 20,
    progress: bool = True,
) -> SuiteReport:
    """Check random instances of every rule until ``trials`` trials per rule were checked.

    Trials that were vacuous or out of range do not count; a rule gives up after
    ``max_draws * trials`` sampled assignments.
    """
    report = SuiteReport("rules")
    for name in rules or sorted(RULES):
        summary = RuleReport(name)
        with tqdm(total=trials, desc=name, disable=not progress) as bar:
            while summary.checked < trials and summary.trials < max_draws * trials:
                instance = sample_rule(name, sampler)
                before = summary.checked
                summary.merge(check_rule(instance, sampler, per_instance, bounds))
                bar.update(min(summary.checked, trials) - min(before, trials))
        report.rules.append(summary)
        report.count(name, summary.checked)
        if summary.status != "passed":
            report.fail(name, status=summary.status, counterexamples=summary.counterexamples[:3])
        elif summary.checked < trials:
            report.fail(name, status="too-few-checked", checked=summary.checked, trials=summary.trials)
    return report
