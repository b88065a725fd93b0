"""Scenario tables: per-atom boxes, grid steps and integrands.

A scenario table has one row per box with the columns

    atom       index of the atom (0-based)
    lo, hi     corners, as ``;``-separated rationals ("-1;0") or JSON lists
    delta      grid step of the atom
    integrand  cost expression of the atom

Several rows may share an atom; their boxes form a union and must agree on
``delta`` and ``integrand`` (blank cells inherit from an earlier row of the atom).
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd

from .analysis import Box, CompactField, Integrand
from .errors import FormulaSyntaxError, MalformedScenario
from .measure import MeasureSpace, make_space

REQUIRED_COLUMNS = ("atom", "lo", "hi", "delta", "integrand")


@dataclass(frozen=True)
class Scenario:
    field: CompactField
    integrand: Integrand


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """Load a scenario table from CSV or JSON (a list of row objects)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return pd.read_json(path, orient="records", dtype=False)
    return pd.read_csv(path, dtype=str, skipinitialspace=True)


def _corner(value, row: int, column: str) -> List[Fraction]:
    if isinstance(value, (list, tuple)):
        items = [str(v) for v in value]
    else:
        if value is None or pd.isna(value) or not str(value).strip():
            raise MalformedScenario(row, f"missing {column}")
        items = [part.strip() for part in str(value).split(";")]
    try:
        return [Fraction(item) for item in items]
    except (ValueError, ZeroDivisionError):
        raise MalformedScenario(row, f"{column} is not a list of rationals: {value!r}")


def _blank(value) -> bool:
    return value is None or (not isinstance(value, (list, tuple)) and pd.isna(value)) or str(value).strip() == ""


def _clean_row(record: Dict, row: int, atom_count: Optional[int]) -> Dict:
    """Validate one row; returns atom, box and the raw delta/integrand cells."""
    try:
        atom = Fraction(str(record["atom"]).strip())
    except (ValueError, ZeroDivisionError):
        atom = None
    if atom is None or atom.denominator != 1:
        raise MalformedScenario(row, f"atom is not an integer: {record['atom']!r}")
    atom = int(atom)
    if atom < 0 or (atom_count is not None and atom >= atom_count):
        raise MalformedScenario(row, f"atom {atom} is outside the space")
    lo, hi = _corner(record["lo"], row, "lo"), _corner(record["hi"], row, "hi")
    if len(lo) != len(hi):
        raise MalformedScenario(row, f"corners of dimension {len(lo)} and {len(hi)}")
    if not lo:
        raise MalformedScenario(row, "box of dimension 0")
    if any(l > h for l, h in zip(lo, hi)):
        raise MalformedScenario(row, f"empty box {lo} .. {hi}")
    delta = None
    if not _blank(record["delta"]):
        try:
            delta = Fraction(str(record["delta"]).strip())
        except (ValueError, ZeroDivisionError):
            raise MalformedScenario(row, f"delta is not a rational: {record['delta']!r}")
        if delta <= 0:
            raise MalformedScenario(row, f"delta must be positive, got {delta}")
    integrand = None if _blank(record["integrand"]) else str(record["integrand"]).strip()
    return {"atom": atom, "box": Box(tuple(lo), tuple(hi)), "delta": delta, "integrand": integrand}


def _collect(table: pd.DataFrame, space: Optional[MeasureSpace]):
    missing = [c for c in REQUIRED_COLUMNS if c not in table.columns]
    if missing:
        raise MalformedScenario(0, f"missing columns {missing}")
    if table.empty:
        raise MalformedScenario(0, "no rows")
    atom_count = space.atom_count if space is not None else None
    per_atom: Dict[int, Dict] = {}
    for row, record in enumerate(table.to_dict("records"), start=1):
        clean = _clean_row(record, row, atom_count)
        entry = per_atom.setdefault(clean["atom"], {"boxes": [], "delta": None, "integrand": None})
        if entry["boxes"] and entry["boxes"][0].dim != clean["box"].dim:
            raise MalformedScenario(row, f"box dimension differs from earlier boxes of atom {clean['atom']}")
        entry["boxes"].append(clean["box"])
        for key in ("delta", "integrand"):
            value = clean[key]
            if value is None:
                continue
            if entry[key] is not None and entry[key] != value:
                raise MalformedScenario(row, f"conflicting {key} for atom {clean['atom']}")
            entry[key] = value
    if space is None:
        count = max(per_atom) + 1
        space = make_space([Fraction(1, count)] * count)
    for atom in range(space.atom_count):
        if atom not in per_atom:
            raise MalformedScenario(0, f"no box for atom {atom}")
        for key in ("delta", "integrand"):
            if per_atom[atom][key] is None:
                raise MalformedScenario(0, f"no {key} for atom {atom}")
    return space, per_atom


def _field(space: MeasureSpace, per_atom: Dict[int, Dict]) -> CompactField:
    return CompactField(
        space,
        tuple(tuple(per_atom[a]["boxes"]) for a in range(space.atom_count)),
        tuple(per_atom[a]["delta"] for a in range(space.atom_count)),
    )


def compactfield_from_map(table: pd.DataFrame, space: Optional[MeasureSpace] = None) -> CompactField:
    """Build the compact-valued field described by a scenario table.

    Without ``space`` a uniform space over atoms ``0 .. max(atom)`` is used.

    Raises:
        MalformedScenario: For missing columns or atoms, empty boxes, bad
            rationals and conflicting cells; ``row`` is 1-based, 0 for table-level problems.
    """
    return _field(*_collect(table, space))


def scenario_from_table(table: pd.DataFrame, space: Optional[MeasureSpace] = None) -> Scenario:
    """Field and integrand of a scenario table."""
    space, per_atom = _collect(table, space)
    field = _field(space, per_atom)
    texts = [per_atom[a]["integrand"] for a in range(field.space.atom_count)]
    try:
        integrand = Integrand.from_texts(field.space, texts)
    except FormulaSyntaxError as e:
        raise MalformedScenario(0, f"integrand: {e}")
    return Scenario(field, integrand)


def load_scenario(path: Union[str, Path], space: Optional[MeasureSpace] = None) -> Scenario:
    try:
        table = read_table(path)
    except (OSError, ValueError) as e:
        raise MalformedScenario(0, f"cannot read {path}: {e}")
    return scenario_from_table(table, space)
