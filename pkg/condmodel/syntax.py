"""Concrete syntax for the language L2 of second-order arithmetic.

Grammar (precedence ``! > & > | > -> > <->``, quantifier bodies extend as far
right as possible)::

    formula  := ('exists' | 'forall') var '.' formula | iff
    iff      := implies ('<->' implies)*
    implies  := or ('->' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | quantified | '(' formula ')' | atomic
    atomic   := term '=' term | term '<' term | term 'in' SETVAR
    term     := factor ('+' factor)*
    factor   := atom ('*' atom)*
    atom     := '0' | '1' | numvar | '(' term ')'

Lowercase identifiers are number variables, uppercase identifiers are set
variables. Decimal numerals ``n >= 2`` are expanded to ``(1 + 1 + ... + 1)``
before parsing. Unicode connectives ``¬ ∧ ∨ → ↔ ∃ ∀ ∈ ·`` are accepted.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from .errors import FormulaSyntaxError, MixedCaseVariable

# terms


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class NumVar:
    name: str


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"


Term = Union[Zero, One, NumVar, Plus, Times]

# formulas


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term


@dataclass(frozen=True)
class In:
    term: Term
    var: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExistsNum:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallNum:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    var: str
    body: "Formula"


Formula = Union[
    Eq, Lt, In, Not, And, Or, Implies, Iff, ExistsNum, ForallNum, ExistsSet, ForallSet
]

ATOMIC = (Eq, Lt, In)
BINARY = (And, Or, Implies, Iff)
NUM_QUANTIFIERS = (ExistsNum, ForallNum)
SET_QUANTIFIERS = (ExistsSet, ForallSet)
QUANTIFIERS = NUM_QUANTIFIERS + SET_QUANTIFIERS


def numeral(n: int) -> Term:
    """The closed term ``1 + 1 + ... + 1`` denoting ``n``."""
    if n == 0:
        return Zero()
    term: Term = One()
    for _ in range(n - 1):
        term = Plus(term, One())
    return term


# lexer


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


_KEYWORDS = {"exists": "EXISTS", "forall": "FORALL", "in": "IN"}

_SYMBOLS = [
    ("<->", "IFF"),
    ("->", "IMPLIES"),
    ("↔", "IFF"),
    ("→", "IMPLIES"),
    ("+", "PLUS"),
    ("*", "TIMES"),
    ("·", "TIMES"),
    ("=", "EQ"),
    ("<", "LT"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    (".", "DOT"),
    ("!", "NOT"),
    ("~", "NOT"),
    ("¬", "NOT"),
    ("&", "AND"),
    ("∧", "AND"),
    ("|", "OR"),
    ("∨", "OR"),
    ("∃", "EXISTS"),
    ("∀", "FORALL"),
    ("∈", "IN"),
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+")


def _classify(name: str, col: int) -> str:
    letters = [c for c in name if c.isalpha()]
    if letters and all(c.islower() for c in letters):
        return "NUMVAR"
    if letters and all(c.isupper() for c in letters):
        return "SETVAR"
    raise MixedCaseVariable(f"variable {name!r} mixes upper and lower case", col)


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens, expanding numerals; columns are 1-based."""
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        col = pos + 1
        if ch.isspace():
            pos += 1
            continue
        match = _NUMBER.match(text, pos)
        if match:
            if len(match.group()) > 1 and match.group().startswith("0"):
                raise FormulaSyntaxError(f"malformed numeral {match.group()!r}", col)
            value = int(match.group())
            if value <= 1:
                tokens.append(Token(match.group(), match.group(), col))
            else:
                tokens.append(Token("LPAREN", "(", col))
                for index in range(value):
                    if index:
                        tokens.append(Token("PLUS", "+", col))
                    tokens.append(Token("1", "1", col))
                tokens.append(Token("RPAREN", ")", col))
            pos = match.end()
            continue
        match = _IDENT.match(text, pos)
        if match:
            word = match.group()
            kind = _KEYWORDS.get(word) or _classify(word, col)
            tokens.append(Token(kind, word, col))
            pos = match.end()
            continue
        for symbol, kind in _SYMBOLS:
            if text.startswith(symbol, pos):
                tokens.append(Token(kind, symbol, col))
                pos += len(symbol)
                break
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", col)
    tokens.append(Token("EOF", "", len(text) + 1))
    return tokens


# parser


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def accept(self, kind: str) -> Optional[Token]:
        if self.current.kind == kind:
            token = self.current
            self.pos += 1
            return token
        return None

    def expect(self, kind: str, what: str) -> Token:
        token = self.accept(kind)
        if token is None:
            found = self.current.text or "end of input"
            raise FormulaSyntaxError(f"expected {what}, found {found!r}", self.current.col)
        return token

    def formula(self) -> Formula:
        if self.current.kind in ("EXISTS", "FORALL"):
            return self.quantified()
        return self.iff()

    def quantified(self) -> Formula:
        token = self.tokens[self.pos]
        self.pos += 1
        if self.current.kind == "NUMVAR":
            var = self.expect("NUMVAR", "variable").text
            self.expect("DOT", "'.'")
            body = self.formula()
            return ExistsNum(var, body) if token.kind == "EXISTS" else ForallNum(var, body)
        var = self.expect("SETVAR", "variable").text
        self.expect("DOT", "'.'")
        body = self.formula()
        return ExistsSet(var, body) if token.kind == "EXISTS" else ForallSet(var, body)

    def iff(self) -> Formula:
        left = self.implies()
        while self.accept("IFF"):
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.accept("IMPLIES"):
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("OR"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.accept("AND"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("NOT"):
            return Not(self.unary())
        if self.current.kind in ("EXISTS", "FORALL"):
            return self.quantified()
        if self.current.kind == "LPAREN":
            start = self.pos
            try:
                return self.atomic()
            except FormulaSyntaxError as atomic_error:
                self.pos = start
                try:
                    self.expect("LPAREN", "'('")
                    inner = self.formula()
                    self.expect("RPAREN", "')'")
                    return inner
                except FormulaSyntaxError as nested_error:
                    raise max(atomic_error, nested_error, key=lambda e: e.col)
        return self.atomic()

    def atomic(self) -> Formula:
        left = self.term()
        if self.accept("EQ"):
            return Eq(left, self.term())
        if self.accept("LT"):
            return Lt(left, self.term())
        if self.accept("IN"):
            return In(left, self.expect("SETVAR", "set variable").text)
        found = self.current.text or "end of input"
        raise FormulaSyntaxError(f"expected '=', '<' or 'in', found {found!r}", self.current.col)

    def term(self) -> Term:
        left = self.factor()
        while self.accept("PLUS"):
            left = Plus(left, self.factor())
        return left

    def factor(self) -> Term:
        left = self.atom()
        while self.accept("TIMES"):
            left = Times(left, self.atom())
        return left

    def atom(self) -> Term:
        if self.accept("0"):
            return Zero()
        if self.accept("1"):
            return One()
        token = self.accept("NUMVAR")
        if token:
            return NumVar(token.text)
        if self.accept("LPAREN"):
            inner = self.term()
            self.expect("RPAREN", "')'")
            return inner
        found = self.current.text or "end of input"
        raise FormulaSyntaxError(f"expected term, found {found!r}", self.current.col)


def parse(text: str) -> Formula:
    """Parse one formula.

    Raises:
        FormulaSyntaxError: With the 1-based column of the offending token.
        MixedCaseVariable: For identifiers such as ``xY``.

    Example:
        >>> parse("exists x. x+x = y")
        ExistsNum(var='x', body=Eq(left=Plus(left=NumVar(name='x'), right=NumVar(name='x')), right=NumVar(name='y')))
    """
    parser = _Parser(tokenize(text))
    result = parser.formula()
    if parser.current.kind != "EOF":
        raise FormulaSyntaxError(f"unexpected {parser.current.text!r}", parser.current.col)
    return result


def parse_term(text: str) -> Term:
    parser = _Parser(tokenize(text))
    result = parser.term()
    if parser.current.kind != "EOF":
        raise FormulaSyntaxError(f"unexpected {parser.current.text!r}", parser.current.col)
    return result


def read_formula_file(path: Union[str, Path]) -> List[Tuple[int, str, Formula]]:
    """Read one formula per line; ``#`` starts a comment, blank lines are skipped.

    Returns:
        List of ``(line number, source text, formula)``.

    Raises:
        FormulaSyntaxError: Carrying the line number of the bad formula.
    """
    results = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                results.append((line_no, text, parse(text)))
            except FormulaSyntaxError as e:
                raise e.at_line(line_no)
    return results


# printer

_TERM_PLUS, _TERM_TIMES, _TERM_ATOM = 1, 2, 3
_QUANT, _IFF, _IMPLIES, _OR, _AND, _NOT, _ATOM = 0, 1, 2, 3, 4, 5, 6

_BINARY_OPS = {
    Iff: (" <-> ", _IFF),
    Implies: (" -> ", _IMPLIES),
    Or: (" | ", _OR),
    And: (" & ", _AND),
}


def _term(t: Term) -> Tuple[str, int]:
    if isinstance(t, Zero):
        return "0", _TERM_ATOM
    if isinstance(t, One):
        return "1", _TERM_ATOM
    if isinstance(t, NumVar):
        return t.name, _TERM_ATOM
    level = _TERM_PLUS if isinstance(t, Plus) else _TERM_TIMES
    op = " + " if isinstance(t, Plus) else " * "
    left, left_level = _term(t.left)
    right, right_level = _term(t.right)
    if left_level < level:
        left = f"({left})"
    if right_level <= level:
        right = f"({right})"
    return left + op + right, level


def format_term(t: Term) -> str:
    return _term(t)[0]


def _formula(f: Formula) -> Tuple[str, int]:
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}", _ATOM
    if isinstance(f, Lt):
        return f"{format_term(f.left)} < {format_term(f.right)}", _ATOM
    if isinstance(f, In):
        return f"{format_term(f.term)} in {f.var}", _ATOM
    if isinstance(f, Not):
        body, level = _formula(f.body)
        if level < _NOT:
            body = f"({body})"
        return "!" + body, _NOT
    if isinstance(f, QUANTIFIERS):
        word = "exists" if isinstance(f, (ExistsNum, ExistsSet)) else "forall"
        return f"{word} {f.var}. {_formula(f.body)[0]}", _QUANT
    op, level = _BINARY_OPS[type(f)]
    left, left_level = _formula(f.left)
    right, right_level = _formula(f.right)
    right_assoc = isinstance(f, Implies)
    if left_level < level or (left_level == level and right_assoc):
        left = f"({left})"
    if right_level < level or (right_level == level and not right_assoc):
        right = f"({right})"
    return left + op + right, level


def format_formula(f: Formula) -> str:
    """Print ``f`` in canonical ASCII form; ``parse(format_formula(f)) == f``."""
    return _formula(f)[0]


# analysis of formulas


def term_vars(t: Term) -> Set[str]:
    if isinstance(t, NumVar):
        return {t.name}
    if isinstance(t, (Plus, Times)):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def free_vars(f: Formula) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """Free number variables and free set variables of ``f``."""
    nums: Set[str] = set()
    sets: Set[str] = set()

    def walk(g: Formula, bound_nums: FrozenSet[str], bound_sets: FrozenSet[str]) -> None:
        if isinstance(g, (Eq, Lt)):
            nums.update((term_vars(g.left) | term_vars(g.right)) - bound_nums)
        elif isinstance(g, In):
            nums.update(term_vars(g.term) - bound_nums)
            if g.var not in bound_sets:
                sets.add(g.var)
        elif isinstance(g, Not):
            walk(g.body, bound_nums, bound_sets)
        elif isinstance(g, BINARY):
            walk(g.left, bound_nums, bound_sets)
            walk(g.right, bound_nums, bound_sets)
        elif isinstance(g, NUM_QUANTIFIERS):
            walk(g.body, bound_nums | {g.var}, bound_sets)
        else:
            walk(g.body, bound_nums, bound_sets | {g.var})

    walk(f, frozenset(), frozenset())
    return frozenset(nums), frozenset(sets)


def is_arithmetical(f: Formula) -> bool:
    """True iff ``f`` contains no set quantifiers; set parameters are allowed."""
    if isinstance(f, ATOMIC):
        return True
    if isinstance(f, SET_QUANTIFIERS):
        return False
    if isinstance(f, Not) or isinstance(f, NUM_QUANTIFIERS):
        return is_arithmetical(f.body)
    return is_arithmetical(f.left) and is_arithmetical(f.right)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, QUANTIFIERS):
        return 1 + quantifier_depth(f.body)
    return max(quantifier_depth(f.left), quantifier_depth(f.right))


def desugar(f: Formula) -> Formula:
    """Rewrite ``| -> <-> forall`` into ``& ! exists``."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Iff):
        left, right = desugar(f.left), desugar(f.right)
        return And(Not(And(left, Not(right))), Not(And(right, Not(left))))
    if isinstance(f, ExistsNum):
        return ExistsNum(f.var, desugar(f.body))
    if isinstance(f, ForallNum):
        return Not(ExistsNum(f.var, Not(desugar(f.body))))
    if isinstance(f, ExistsSet):
        return ExistsSet(f.var, desugar(f.body))
    return Not(ExistsSet(f.var, Not(desugar(f.body))))


# substitution


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    stem = base.rstrip("0123456789") or base
    index = 1
    while f"{stem}{index}" in taken:
        index += 1
    return f"{stem}{index}"


def all_names(f: Formula) -> Set[str]:
    """Every variable name occurring in ``f``, bound or free."""
    if isinstance(f, (Eq, Lt)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, In):
        return term_vars(f.term) | {f.var}
    if isinstance(f, Not):
        return all_names(f.body)
    if isinstance(f, QUANTIFIERS):
        return all_names(f.body) | {f.var}
    return all_names(f.left) | all_names(f.right)


def subst_term(t: Term, name: str, replacement: Term) -> Term:
    if isinstance(t, NumVar):
        return replacement if t.name == name else t
    if isinstance(t, Plus):
        return Plus(subst_term(t.left, name, replacement), subst_term(t.right, name, replacement))
    if isinstance(t, Times):
        return Times(subst_term(t.left, name, replacement), subst_term(t.right, name, replacement))
    return t


def substitute(f: Formula, name: str, replacement: Term) -> Formula:
    """Replace free occurrences of number variable ``name`` by a term, avoiding capture."""
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, name, replacement), subst_term(f.right, name, replacement))
    if isinstance(f, Lt):
        return Lt(subst_term(f.left, name, replacement), subst_term(f.right, name, replacement))
    if isinstance(f, In):
        return In(subst_term(f.term, name, replacement), f.var)
    if isinstance(f, Not):
        return Not(substitute(f.body, name, replacement))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, name, replacement), substitute(f.right, name, replacement))
    if isinstance(f, SET_QUANTIFIERS):
        return type(f)(f.var, substitute(f.body, name, replacement))
    if f.var == name:
        return f
    var, body = f.var, f.body
    if var in term_vars(replacement):
        new_var = fresh_name(var, all_names(body) | term_vars(replacement) | {name})
        body = substitute(body, var, NumVar(new_var))
        var = new_var
    return type(f)(var, substitute(body, name, replacement))


def substitute_set(f: Formula, name: str, replacement: str) -> Formula:
    """Rename free occurrences of set variable ``name`` to ``replacement``, avoiding capture."""
    if isinstance(f, In):
        return In(f.term, replacement if f.var == name else f.var)
    if isinstance(f, (Eq, Lt)):
        return f
    if isinstance(f, Not):
        return Not(substitute_set(f.body, name, replacement))
    if isinstance(f, BINARY):
        return type(f)(
            substitute_set(f.left, name, replacement),
            substitute_set(f.right, name, replacement),
        )
    if isinstance(f, NUM_QUANTIFIERS):
        return type(f)(f.var, substitute_set(f.body, name, replacement))
    if f.var == name:
        return f
    var, body = f.var, f.body
    if var == replacement:
        new_var = fresh_name(var, all_names(body) | {name, replacement})
        body = substitute_set(body, var, new_var)
        var = new_var
    return type(f)(var, substitute_set(body, name, replacement))
