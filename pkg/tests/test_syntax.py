import pytest

from condmodel.errors import FormulaSyntaxError, MixedCaseVariable
from condmodel.sampling import Sampler
from condmodel.syntax import (
    And,
    Eq,
    ExistsNum,
    ExistsSet,
    ForallNum,
    Implies,
    In,
    Lt,
    Not,
    NumVar,
    One,
    Or,
    Plus,
    Times,
    Zero,
    desugar,
    format_formula,
    free_vars,
    is_arithmetical,
    numeral,
    parse,
    parse_term,
    quantifier_depth,
    read_formula_file,
    substitute,
    substitute_set,
)

x, y = NumVar("x"), NumVar("y")


def test_parse_existential():
    assert parse("exists x. x+x = y") == ExistsNum("x", Eq(Plus(x, x), y))


def test_unicode_aliases_match_ascii():
    assert parse("∀x. ¬(x ∈ X) ∨ x·1 = x") == parse("forall x. !(x in X) | x*1 = x")
    assert parse("~ 0 < 1") == parse("!0 < 1")


def test_numerals_expand():
    assert parse_term("2") == Plus(One(), One())
    assert numeral(3) == Plus(Plus(One(), One()), One())
    assert numeral(0) == Zero()


@pytest.mark.parametrize("text,col", [("x = 00", 5), ("01 < x", 1), ("x + 007 = y", 5)])
def test_leading_zeros_rejected(text, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.col == col
    assert info.value.message.startswith("malformed numeral")


def test_precedence():
    assert parse("x = 0 | y = 0 & x < y") == Or(Eq(x, Zero()), And(Eq(y, Zero()), Lt(x, y)))
    assert parse_term("x + y * x") == Plus(x, Times(y, x))
    assert parse("0 = 0 -> 0 = 1 -> 1 = 1") == Implies(
        Eq(Zero(), Zero()), Implies(Eq(Zero(), One()), Eq(One(), One()))
    )


def test_quantifier_scope_extends_right():
    f = parse("exists X. 0 in X & forall x. x in X")
    assert isinstance(f, ExistsSet)
    assert isinstance(f.body, And)
    assert isinstance(f.body.right, ForallNum)


def test_parenthesized_formula_and_term():
    assert parse("(x + 1) = y") == Eq(Plus(x, One()), y)
    assert parse("(x = y)") == Eq(x, y)
    assert parse("!(x = y & y = x)") == Not(And(Eq(x, y), Eq(y, x)))


@pytest.mark.parametrize(
    "text,col",
    [
        ("x = ", 5),
        ("x + = y", 5),
        ("exists x x = 0", 10),
        ("x = y )", 7),
        ("x ? y", 3),
    ],
)
def test_syntax_error_columns(text, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.col == col
    assert info.value.line == 1


def test_mixed_case_rejected():
    with pytest.raises(MixedCaseVariable):
        parse("xY = 0")


@pytest.mark.parametrize(
    "text",
    [
        "exists x. x + x = y",
        "forall X. (0 in X & forall x. (x in X -> x + 1 in X)) -> forall x. x in X",
        "!(x = y) <-> y < x | x * (y + 1) = 0",
        "!exists x. x < 0",
        "x * y * x = x * (y * x)",
    ],
)
def test_print_then_parse(text):
    f = parse(text)
    assert parse(format_formula(f)) == f


def test_printer_on_sampled_formulas():
    sampler = Sampler(11)
    for _ in range(500):
        f = sampler.formula(("x", "y"), ("X",), depth=3, quantifier_depth=2)
        assert parse(format_formula(f)) == f


def test_free_vars():
    nums, sets = free_vars(parse("exists x. x + y = z & x in X | forall Y. y in Y"))
    assert nums == {"y", "z"}
    assert sets == {"X"}


def test_classification():
    assert is_arithmetical(parse("forall x. x in X"))
    assert not is_arithmetical(parse("exists X. 0 in X"))
    assert quantifier_depth(parse("exists x. forall y. x < y | exists z. z = 0")) == 3


def test_desugar_uses_core_connectives():
    f = desugar(parse("forall x. x = 0 -> x < 1 | x = 1"))
    assert isinstance(f, Not) and isinstance(f.body, ExistsNum)
    text = format_formula(f)
    assert "forall" not in text and "->" not in text and "|" not in text


def test_substitute_avoids_capture():
    f = parse("exists y. x < y")
    result = substitute(f, "x", y)
    assert isinstance(result, ExistsNum)
    assert result.var != "y"
    assert result.body == Lt(y, NumVar(result.var))


def test_substitute_respects_binding():
    f = parse("exists x. x = 0")
    assert substitute(f, "x", One()) == f


def test_substitute_set_renames():
    f = parse("x in X & exists Y. x in Y")
    assert substitute_set(f, "X", "Z") == And(In(x, "Z"), ExistsSet("Y", In(x, "Y")))
    captured = substitute_set(parse("exists Y. x in X & x in Y"), "X", "Y")
    assert captured.var != "Y"
    assert captured.body.left == In(x, "Y")


def test_read_formula_file(tmp_path):
    path = tmp_path / "formulas.l2"
    path.write_text("# header\nx = x\n\nexists x. x = y  # trailing\n")
    rows = read_formula_file(path)
    assert [(line, text) for line, text, _ in rows] == [(2, "x = x"), (4, "exists x. x = y")]


def test_read_formula_file_reports_line(tmp_path):
    path = tmp_path / "formulas.l2"
    path.write_text("x = x\nx = \n")
    with pytest.raises(FormulaSyntaxError) as info:
        read_formula_file(path)
    assert info.value.line == 2
    assert info.value.col == 4
