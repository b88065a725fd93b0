"""Exception hierarchy for the conditional model engine.

Every error derives from ``CondModelError`` and from the builtin exception that
best describes it, so callers may catch either.
"""

from typing import Optional


class CondModelError(Exception):
    """Base class for all errors raised by condmodel."""


# measure algebra


class EmptySpace(CondModelError, ValueError):
    pass


class NonpositiveWeight(CondModelError, ValueError):
    pass


class SpaceMismatch(CondModelError, ValueError):
    pass


class NotDisjoint(CondModelError, ValueError):
    pass


class NotExhaustive(CondModelError, ValueError):
    pass


# conditional values


class LengthMismatch(CondModelError, ValueError):
    pass


class UnsupportedOperation(CondModelError, TypeError):
    pass


class DivisionByZeroAtAtom(CondModelError, ZeroDivisionError):
    """Raised when a divisor vanishes on a nonempty event.

    Attributes:
        event: The event on which the divisor is zero.
    """

    def __init__(self, event):
        self.event = event
        super().__init__(f"division by zero at atoms {list(event.atoms())}")


# conditional sets


class EmptyFiber(CondModelError, ValueError):
    pass


class UnboundedFiber(CondModelError, ValueError):
    pass


class EmptyList(CondModelError, ValueError):
    pass


# formula language


class FormulaSyntaxError(CondModelError, ValueError):
    """A formula could not be parsed.

    Attributes:
        line: 1-based line number (1 for single-formula input).
        col: 1-based column of the offending token.
    """

    def __init__(self, message: str, col: int, line: int = 1):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{message} at line {line}, col {col}")

    def at_line(self, line: int) -> "FormulaSyntaxError":
        return type(self)(self.message, self.col, line)


class MixedCaseVariable(FormulaSyntaxError):
    pass


# evaluator


class UnboundVariable(CondModelError, LookupError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} is not assigned")


class NotExistential(CondModelError, ValueError):
    pass


class NotArithmetical(CondModelError, ValueError):
    pass


class FreeSetVariableClash(CondModelError, ValueError):
    pass


class AxiomFailure(CondModelError, AssertionError):
    """An axiom evaluated to an event other than the full event.

    Attributes:
        axiom: Name or text of the failing axiom.
        assignment: The assignment under which it failed.
        event: The event that was obtained.
    """

    def __init__(self, axiom: str, assignment, event):
        self.axiom = axiom
        self.assignment = assignment
        self.event = event
        super().__init__(f"axiom {axiom!r} evaluated to {list(event.atoms())}")


class UnknownRule(CondModelError, LookupError):
    pass


class EigenvariableViolation(CondModelError, ValueError):
    pass


class BoundTooSmallWarning(UserWarning):
    """A term value reached past the set bound in a membership test."""


# conditional analysis


class UnboundedOnHorizon(CondModelError, ValueError):
    def __init__(self, atom: int, index: Optional[int] = None):
        self.atom = atom
        self.index = index
        super().__init__(f"sequence exceeds its bound at atom {atom}, index {index}")


class NoAdmissibleIndex(CondModelError, LookupError):
    def __init__(self, atom: int, step: int):
        self.atom = atom
        self.step = step
        super().__init__(f"no admissible index at atom {atom} for step {step}")


class EvaluationError(CondModelError, ArithmeticError):
    def __init__(self, atom: int, point):
        self.atom = atom
        self.point = point
        super().__init__(f"integrand undefined at atom {atom}, point {list(point)}")


class MalformedScenario(CondModelError, ValueError):
    def __init__(self, row, reason: str):
        self.row = row
        self.reason = reason
        super().__init__(f"malformed scenario row {row}: {reason}")


class NotCovered(CondModelError, ValueError):
    pass


# command line


class ConfigError(CondModelError, ValueError):
    pass
