import itertools
import json
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from condmodel import scenarios
from condmodel.analysis import RaggedVec, argmin, selections_contain
from condmodel.errors import MalformedScenario
from condmodel.measure import make_space
from condmodel.scenarios import (
    compactfield_from_map,
    load_scenario,
    read_table,
    scenario_from_table,
)


@pytest.fixture
def quadratic_table():
    """Two atoms on [-1, 1] with step 1"""
    return pd.DataFrame(
        [
            {"atom": "0", "lo": "-1", "hi": "1", "delta": "1", "integrand": "x^2"},
            {"atom": "1", "lo": "-1", "hi": "1", "delta": "1", "integrand": "(x - 1)^2"},
        ]
    )


@pytest.fixture
def two_boxes():
    return pd.DataFrame(
        [
            {"atom": 0, "lo": "0", "hi": "1", "delta": "1/2", "integrand": "x"},
            {"atom": 1, "lo": "2", "hi": "3", "delta": "1/2", "integrand": "x"},
        ]
    )


def test_quadratic_scenario(quadratic_table):
    scenario = scenario_from_table(quadratic_table)
    assert scenario.field.space.weights == (Fraction(1, 2), Fraction(1, 2))
    selection = argmin(scenario.field, scenario.integrand)
    assert selection.point.coords == ((Fraction(0),), (Fraction(1),))
    assert selection.value.values == (0, 0)


def test_selections_from_table(two_boxes):
    field = compactfield_from_map(two_boxes)
    space = field.space
    inside = RaggedVec(space, (("1/2",), ("5/2",)))
    assert selections_contain(field, inside).is_full()
    partly = RaggedVec(space, ((2,), ("5/2",)))
    assert selections_contain(field, partly).atoms() == [1]


def test_explicit_space(two_boxes):
    space = make_space(["1/4", "3/4"])
    assert compactfield_from_map(two_boxes, space).space == space
    with pytest.raises(MalformedScenario):
        compactfield_from_map(two_boxes, make_space([1, 1, 1]))


def test_rows_of_one_atom_form_a_union():
    table = pd.DataFrame(
        [
            {"atom": 0, "lo": "0;0", "hi": "1;1", "delta": "1", "integrand": "x1 + x2"},
            {"atom": 0, "lo": "2;2", "hi": "3;3", "delta": "", "integrand": ""},
        ]
    )
    field = compactfield_from_map(table)
    assert len(field.boxes[0]) == 2
    assert field.deltas == (Fraction(1),)
    assert len(field.grid(0)) == 8


@pytest.mark.parametrize(
    "row,reason",
    [
        ({"atom": 0, "lo": "1", "hi": "0", "delta": "1", "integrand": "x"}, "empty box"),
        ({"atom": 0, "lo": "0", "hi": "1", "delta": "0", "integrand": "x"}, "positive"),
        ({"atom": 0, "lo": "0", "hi": "1;2", "delta": "1", "integrand": "x"}, "dimension"),
        ({"atom": 0, "lo": "a", "hi": "1", "delta": "1", "integrand": "x"}, "rationals"),
        ({"atom": "1/2", "lo": "0", "hi": "1", "delta": "1", "integrand": "x"}, "integer"),
        ({"atom": 0, "lo": "", "hi": "1", "delta": "1", "integrand": "x"}, "missing lo"),
        ({"atom": 0, "lo": "0", "hi": "1", "delta": "1", "integrand": ""}, "no integrand"),
    ],
)
def test_malformed_rows(row, reason):
    with pytest.raises(MalformedScenario) as info:
        scenario_from_table(pd.DataFrame([row]))
    assert reason in info.value.reason


def test_conflicting_cells_report_row():
    table = pd.DataFrame(
        [
            {"atom": 0, "lo": "0", "hi": "1", "delta": "1", "integrand": "x"},
            {"atom": 0, "lo": "2", "hi": "3", "delta": "1/2", "integrand": "x"},
        ]
    )
    with pytest.raises(MalformedScenario) as info:
        compactfield_from_map(table)
    assert info.value.row == 2


def test_missing_atom_and_columns():
    gap = pd.DataFrame([{"atom": 1, "lo": "0", "hi": "1", "delta": "1", "integrand": "x"}])
    with pytest.raises(MalformedScenario) as info:
        compactfield_from_map(gap)
    assert info.value.row == 0
    with pytest.raises(MalformedScenario):
        compactfield_from_map(pd.DataFrame([{"atom": 0, "lo": "0"}]))


def test_bad_integrand():
    table = pd.DataFrame([{"atom": 0, "lo": "0", "hi": "1", "delta": "1", "integrand": "x +"}])
    with pytest.raises(MalformedScenario) as info:
        scenario_from_table(table)
    assert "integrand" in info.value.reason


def test_load_csv(tmp_path):
    path = tmp_path / "scenario.csv"
    path.write_text("atom,lo,hi,delta,integrand\n0,-1,1,1,x^2\n1,-1,1,1,(x - 1)^2\n")
    scenario = load_scenario(path)
    assert scenario.integrand.texts == ("x^2", "(x - 1)^2")
    assert read_table(path).shape == (2, 5)


def test_load_json(tmp_path):
    path = tmp_path / "scenario.json"
    rows = [
        {"atom": 0, "lo": [-1, 0], "hi": [1, 0], "delta": "1", "integrand": "x1 * x1 + x2"},
        {"atom": 1, "lo": ["1/2"], "hi": ["3/2"], "delta": "1/2", "integrand": "x"},
    ]
    path.write_text(json.dumps(rows))
    scenario = load_scenario(path)
    assert scenario.field.dim.values == (2, 1)
    assert scenario.field.grid(1) == [(Fraction(1, 2),), (Fraction(1),), (Fraction(3, 2),)]


def test_load_missing_file(tmp_path):
    with pytest.raises(MalformedScenario):
        load_scenario(tmp_path / "nope.csv")


def test_table_rows_are_collected_once(quadratic_table):
    with patch("condmodel.scenarios._collect", wraps=scenarios._collect) as collect:
        scenario_from_table(quadratic_table)
    assert collect.call_count == 1


def _axis(lo, hi, delta):
    values, v = [], lo
    while v <= hi:
        values.append(v)
        v += delta
    if values[-1] != hi:
        values.append(hi)
    return values


def _random_integrand(rng, n):
    """Expression text and an independent evaluator for it."""
    centers = [Fraction(int(rng.integers(-4, 5)), 2) for _ in range(n)]
    kind = int(rng.integers(4))
    if kind == 0:
        text = " + ".join(f"(x{i + 1} - ({c}))^2" for i, c in enumerate(centers))
        return text, lambda p: sum((p[i] - c) ** 2 for i, c in enumerate(centers))
    if kind == 1:
        text = " + ".join(f"({c}) * x{i + 1}" for i, c in enumerate(centers))
        return text, lambda p: sum(c * p[i] for i, c in enumerate(centers))
    if kind == 2:
        # ties along every coordinate but the first
        return f"(x1 - ({centers[0]}))^2", lambda p: (p[0] - centers[0]) ** 2
    return "0 * x1", lambda p: Fraction(0)


def _random_scenario(rng):
    rows, expected = [], []
    for atom in range(int(rng.integers(1, 5))):
        n = int(rng.integers(1, 4))
        delta = [Fraction(1, 2), Fraction(2, 3), Fraction(1)][int(rng.integers(3))]
        text, fn = _random_integrand(rng, n)
        points = set()
        for b in range(int(rng.integers(1, 3))):
            lo = [Fraction(int(rng.integers(-2, 3)), 2) for _ in range(n)]
            hi = [l + Fraction(int(rng.integers(0, 5)), 2) for l in lo]
            rows.append(
                {
                    "atom": atom,
                    "lo": ";".join(str(c) for c in lo),
                    "hi": ";".join(str(c) for c in hi),
                    "delta": str(delta) if b == 0 else "",
                    "integrand": text if b == 0 else "",
                }
            )
            axes = [_axis(l, h, delta) for l, h in zip(lo, hi)]
            points.update(itertools.product(*axes))
        best = min(points, key=lambda p: (fn(p), p))
        expected.append((best, fn(best)))
    return pd.DataFrame(rows), expected


def test_argmin_matches_exhaustive_minimum():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        table, expected = _random_scenario(rng)
        scenario = scenario_from_table(table)
        selection = argmin(scenario.field, scenario.integrand)
        for atom, (point, value) in enumerate(expected):
            assert selection.point.coords[atom] == point, table
            assert selection.value.values[atom] == value
        assert argmin(scenario.field, scenario.integrand) == selection
