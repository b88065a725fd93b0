"""Random spaces, conditional objects, assignments and formulas.

All randomness flows through one ``numpy.random.Generator`` so a run is
reproducible from its seed.
"""

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .config import SUITE
from .evaluator import Assignment
from .measure import Event, MeasureSpace, Partition, make_space
from .sets import CondSet, Fiber, make_stable
from .syntax import (
    And,
    Eq,
    ExistsNum,
    ExistsSet,
    ForallNum,
    ForallSet,
    Formula,
    Iff,
    Implies,
    In,
    Lt,
    Not,
    NumVar,
    One,
    Or,
    Plus,
    Term,
    Times,
    Zero,
    free_vars,
)
from .values import CondNat

BOUND_NUM_NAMES = ("u", "v", "w")
BOUND_SET_NAMES = ("Z", "W")


class Sampler:
    """Draws random objects for the randomized suites.

    Attributes:
        rng (numpy.random.Generator): The single source of randomness.
        max_value (int): Sampled naturals lie in ``0..max_value-1``.
        set_universe (int): Sampled fibers are built from ``0..set_universe-1``.
    """

    def __init__(
        self,
        seed: Union[int, np.random.Generator] = SUITE.seed,
        max_value: int = SUITE.max_value,
        set_universe: int = SUITE.set_universe,
    ):
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self.max_value = max_value
        self.set_universe = set_universe

    def chance(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def pick(self, items: Sequence):
        return items[int(self.rng.integers(len(items)))]

    def space(self, max_atoms: int = 5) -> MeasureSpace:
        k = int(self.rng.integers(1, max_atoms + 1))
        weights = [
            Fraction(int(self.rng.integers(1, 10)), int(self.rng.integers(1, 10)))
            for _ in range(k)
        ]
        return make_space(weights)

    def event(self, space: MeasureSpace) -> Event:
        return Event(space, int(self.rng.integers(0, space.full_mask + 1)))

    def partition(self, space: MeasureSpace, pieces: int) -> Partition:
        """A random partition into ``pieces`` (possibly empty) pieces."""
        owner = [int(self.rng.integers(pieces)) for _ in range(space.atom_count)]
        return Partition(
            space,
            tuple(
                Event(space, sum(1 << a for a, o in enumerate(owner) if o == j))
                for j in range(pieces)
            ),
        )

    def cond_nat(self, space: MeasureSpace, bound: Optional[int] = None) -> CondNat:
        bound = bound or self.max_value
        return CondNat(space, tuple(int(v) for v in self.rng.integers(0, bound, space.atom_count)))

    def fiber(self) -> Fiber:
        elems = [n for n in range(self.set_universe) if self.chance(0.5)]
        if self.chance(0.2):
            return Fiber.cofinite_of(elems)
        if not elems:
            elems = [int(self.rng.integers(self.set_universe))]
        return Fiber.finite(elems)

    def cond_set(self, space: MeasureSpace, off_carrier: float = 0.25) -> CondSet:
        fibers: List[Optional[Fiber]] = [
            None if self.chance(off_carrier) else self.fiber() for _ in range(space.atom_count)
        ]
        carrier = Event(space, sum(1 << a for a, f in enumerate(fibers) if f is not None))
        return make_stable(fibers, carrier)

    def assignment(
        self,
        space: MeasureSpace,
        num_vars: Iterable[str] = (),
        set_vars: Iterable[str] = (),
    ) -> Assignment:
        return Assignment(
            space,
            {name: self.cond_nat(space) for name in sorted(num_vars)},
            {name: self.cond_set(space) for name in sorted(set_vars)},
        )

    def assignment_for(self, space: MeasureSpace, formulas: Iterable[Formula]) -> Assignment:
        """An assignment covering every free variable of ``formulas``."""
        nums, sets = set(), set()
        for f in formulas:
            f_nums, f_sets = free_vars(f)
            nums |= f_nums
            sets |= f_sets
        return self.assignment(space, nums, sets)

    def term(self, num_vars: Sequence[str], depth: int = 2) -> Term:
        if depth <= 0 or self.chance(0.4):
            choices = ["0", "1"] + list(num_vars) * 2
            leaf = self.pick(choices)
            if leaf == "0":
                return Zero()
            if leaf == "1":
                return One()
            return NumVar(leaf)
        node = Plus if self.chance(0.6) else Times
        return node(self.term(num_vars, depth - 1), self.term(num_vars, depth - 1))

    def atomic(self, num_vars: Sequence[str], set_vars: Sequence[str], term_depth: int = 2) -> Formula:
        kinds = ["eq", "lt"] + (["in", "in"] if set_vars else [])
        kind = self.pick(kinds)
        if kind == "in":
            return In(self.term(num_vars, term_depth), self.pick(list(set_vars)))
        left, right = self.term(num_vars, term_depth), self.term(num_vars, term_depth)
        return Eq(left, right) if kind == "eq" else Lt(left, right)

    def formula(
        self,
        num_vars: Sequence[str] = ("x", "y"),
        set_vars: Sequence[str] = (),
        depth: int = 3,
        quantifier_depth: int = 2,
        set_quantifiers: bool = True,
        sugar: bool = True,
    ) -> Formula:
        """A random formula over the given free variables.

        Args:
            num_vars: Number variables that may occur free.
            set_vars: Set variables that may occur free.
            depth: Maximal connective depth.
            quantifier_depth: Maximal quantifier nesting.
            set_quantifiers: Whether set quantifiers may be generated.
            sugar: Whether ``| -> <->`` and universal quantifiers may be generated.
        """
        if depth <= 0:
            return self.atomic(num_vars, set_vars)
        kinds = ["atom", "not", "and"]
        if sugar:
            kinds += ["or", "implies", "iff"]
        if quantifier_depth > 0:
            kinds += ["exists", "exists"]
            if set_quantifiers:
                kinds += ["exists_set"]
        kind = self.pick(kinds)
        args = dict(set_quantifiers=set_quantifiers, sugar=sugar)
        if kind == "atom":
            return self.atomic(num_vars, set_vars)
        if kind == "not":
            return Not(self.formula(num_vars, set_vars, depth - 1, quantifier_depth, **args))
        if kind in ("and", "or", "implies", "iff"):
            node = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[kind]
            return node(
                self.formula(num_vars, set_vars, depth - 1, quantifier_depth, **args),
                self.formula(num_vars, set_vars, depth - 1, quantifier_depth, **args),
            )
        if kind == "exists":
            var = self.pick(BOUND_NUM_NAMES + tuple(num_vars))
            inner_vars = tuple(sorted(set(num_vars) | {var}))
            body = self.formula(inner_vars, set_vars, depth - 1, quantifier_depth - 1, **args)
            universal = sugar and self.chance(0.5)
            return ForallNum(var, body) if universal else ExistsNum(var, body)
        var = self.pick(BOUND_SET_NAMES)
        inner_sets = tuple(sorted(set(set_vars) | {var}))
        body = self.formula(num_vars, inner_sets, depth - 1, quantifier_depth - 1, **args)
        universal = sugar and self.chance(0.5)
        return ForallSet(var, body) if universal else ExistsSet(var, body)
