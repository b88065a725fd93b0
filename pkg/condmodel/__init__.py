from .reset import main as reset
from .database import ReportStore
from .evaluator import (
    Assignment,
    Bounds,
    comprehend,
    eval_formula,
    eval_term,
    evaluate_report,
    sequent_validity,
    witness_exists,
)
from .measure import Event, MeasureSpace, Partition, make_space
from .plots import VisualizationCreator
from .sets import CondSet, Fiber, make_stable
from .syntax import format_formula, parse
from .values import CondNat, CondReal

__all__ = [
    "reset",
    "ReportStore",
    "VisualizationCreator",
    "Assignment",
    "Bounds",
    "comprehend",
    "eval_formula",
    "eval_term",
    "evaluate_report",
    "sequent_validity",
    "witness_exists",
    "Event",
    "MeasureSpace",
    "Partition",
    "make_space",
    "CondSet",
    "Fiber",
    "make_stable",
    "format_formula",
    "parse",
    "CondNat",
    "CondReal",
]
