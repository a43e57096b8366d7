"""Text format for structural systems (`.sem`), plus forward evaluation.

The format is line-oriented, UTF-8, `#` comments:

    # optional attribute declarations
    var NS { manipulativity: manipulatable, observability: observable }

    # explicit equation, value assignment (constant rhs), or
    # participation-only line
    f3: SFR = NS / NF
    f1: NS = 22102
    f10(FS, OI, TA, O, NS, NF)

Canonical serialization sorts variable declarations by name and equations
by id, uses LF line endings, and omits attribute blocks that only carry
defaults.  Number literals are plain decimals with an optional fraction
and exponent; separators (commas, underscores) are rejected.  An
identifier followed by ``(`` inside an expression is reserved for future
function syntax and rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import expr as _expr
from .core import (
    DEFAULT_ATTRIBUTES,
    Equation,
    EquationKind,
    ExplicitForm,
    Manipulativity,
    Observability,
    StructuralSystem,
    VariableAttributes,
    build_system,
)
from .errors import ModelError, ParseError
from .expr import BinOp, Const, Expression, Neg, Var
from .ordering import OrderingResult

_TOKEN_RE = re.compile(
    r"""
    (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[:=(){},+\-*/])
  | (?P<space>[ \t]+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | name | punct | eol
    text: str
    line: int
    column: int


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        if kind == "space":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {match.group()!r}", line_no, match.start() + 1)
        tokens.append(_Token(kind, match.group(), line_no, match.start() + 1))
    tokens.append(_Token("eol", "", line_no, len(text) + 1))
    return tokens


class _LineParser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != "eol":
            self.pos += 1
        return token

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        token = self.peek()
        if token.kind == kind and (text is None or token.text == text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Token:
        token = self.accept(kind, text)
        if token is None:
            found = self.peek()
            expected = what or (text if text is not None else kind)
            got = repr(found.text) if found.kind != "eol" else "end of line"
            raise ParseError(f"expected {expected}, found {got}", found.line, found.column)
        return token

    def expect_end(self) -> None:
        token = self.peek()
        if token.kind != "eol":
            raise ParseError(f"unexpected trailing {token.text!r}", token.line, token.column)

    # expression grammar: expr := term (("+"|"-") term)*
    #                     term := unary (("*"|"/") unary)*
    #                     unary := "-" unary | primary
    #                     primary := NUMBER | NAME | "(" expr ")"
    def parse_expression(self) -> Expression:
        node = self.parse_term()
        while True:
            token = self.peek()
            if token.kind == "punct" and token.text in ("+", "-"):
                self.next()
                node = BinOp(token.text, node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Expression:
        node = self.parse_unary()
        while True:
            token = self.peek()
            if token.kind == "punct" and token.text in ("*", "/"):
                self.next()
                node = BinOp(token.text, node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> Expression:
        if self.accept("punct", "-"):
            operand = self.parse_unary()
            # fold a negated literal so "-5" round-trips as Const(-5)
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        return self.parse_primary()

    def parse_primary(self) -> Expression:
        token = self.next()
        if token.kind == "number":
            return Const(float(token.text))
        if token.kind == "name":
            follower = self.peek()
            if follower.kind == "punct" and follower.text == "(":
                raise ParseError(
                    f"function call syntax {token.text!r}(...) is reserved and not supported",
                    follower.line,
                    follower.column,
                )
            return Var(token.text)
        if token.kind == "punct" and token.text == "(":
            node = self.parse_expression()
            self.expect("punct", ")")
            return node
        got = repr(token.text) if token.kind != "eol" else "end of line"
        raise ParseError(f"expected expression, found {got}", token.line, token.column)


_MANIPULATIVITY = {m.value: m for m in Manipulativity}
_OBSERVABILITY = {o.value: o for o in Observability}
_ATTRIBUTE_KEYS = ("manipulativity", "observability", "manipulation_cost", "observation_cost")


def _parse_hyphen_word(parser: _LineParser) -> str:
    parts = [parser.expect("name", what="attribute value").text]
    while parser.accept("punct", "-"):
        parts.append(parser.expect("name", what="attribute value").text)
    return "-".join(parts)


def _parse_attribute_block(parser: _LineParser) -> VariableAttributes:
    fields: dict[str, object] = {}
    parser.expect("punct", "{")
    while True:
        key_token = parser.expect("name", what="attribute keyword")
        key = key_token.text
        if key not in _ATTRIBUTE_KEYS:
            raise ParseError(
                f"unknown attribute keyword {key!r}", key_token.line, key_token.column
            )
        if key in fields:
            raise ParseError(f"duplicate attribute {key!r}", key_token.line, key_token.column)
        parser.expect("punct", ":")
        if key == "manipulativity":
            word = _parse_hyphen_word(parser)
            if word not in _MANIPULATIVITY:
                raise ParseError(
                    f"invalid manipulativity {word!r}", key_token.line, key_token.column
                )
            fields[key] = _MANIPULATIVITY[word]
        elif key == "observability":
            word = _parse_hyphen_word(parser)
            if word not in _OBSERVABILITY:
                raise ParseError(
                    f"invalid observability {word!r}", key_token.line, key_token.column
                )
            fields[key] = _OBSERVABILITY[word]
        else:
            number = parser.expect("number", what="cost value")
            fields[key] = float(number.text)
        if parser.accept("punct", "}"):
            break
        parser.expect("punct", ",")
    return VariableAttributes(**fields)  # type: ignore[arg-type]


def _parse_equation(parser: _LineParser, id_token: _Token) -> Equation:
    if parser.accept("punct", ":"):
        lhs = parser.expect("name", what="left-hand-side variable").text
        parser.expect("punct", "=")
        rhs = parser.parse_expression()
        parser.expect_end()
        kind = EquationKind.CORE
        if not _expr.free_variables(rhs):
            kind = EquationKind.VALUE_ASSIGNMENT
        participants = (lhs,) + tuple(
            v for v in _expr.variables_in_order(rhs) if v != lhs
        )
        return Equation(
            id=id_token.text,
            participants=participants,
            kind=kind,
            explicit_form=ExplicitForm(lhs, rhs),
        )
    parser.expect("punct", "(", what="':' or '('")
    participants = [parser.expect("name", what="participant variable").text]
    while parser.accept("punct", ","):
        participants.append(parser.expect("name", what="participant variable").text)
    parser.expect("punct", ")")
    parser.expect_end()
    seen = set()
    for name in participants:
        if name in seen:
            raise ParseError(
                f"duplicate participant {name!r}", id_token.line, id_token.column
            )
        seen.add(name)
    return Equation(id=id_token.text, participants=tuple(participants))


def parse_equation_line(text: str, line_no: int = 1) -> Equation:
    """Parse a single equation line (no declarations, no comments)."""
    parser = _LineParser(_tokenize_line(text, line_no))
    id_token = parser.expect("name", what="equation id")
    try:
        return _parse_equation(parser, id_token)
    except ModelError as exc:
        raise ParseError(str(exc), id_token.line, id_token.column) from exc


def parse_model(text: str) -> StructuralSystem:
    """Parse a full model document into a structural system."""
    declarations: dict[str, VariableAttributes] = {}
    declaration_lines: dict[str, int] = {}
    equations: list[Equation] = []
    equation_ids: set[str] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        parser = _LineParser(_tokenize_line(line, line_no))
        first = parser.peek()
        if first.kind == "name" and first.text == "var":
            parser.next()
            name_token = parser.expect("name", what="variable name")
            attrs = DEFAULT_ATTRIBUTES
            if parser.peek().kind != "eol":
                attrs = _parse_attribute_block(parser)
            parser.expect_end()
            if name_token.text in declarations:
                raise ParseError(
                    f"variable {name_token.text!r} declared twice",
                    name_token.line,
                    name_token.column,
                )
            declarations[name_token.text] = attrs
            declaration_lines[name_token.text] = line_no
            continue
        id_token = parser.expect("name", what="equation id or 'var'")
        if id_token.text in equation_ids:
            raise ParseError(
                f"duplicate equation id {id_token.text!r}", id_token.line, id_token.column
            )
        try:
            equation = _parse_equation(parser, id_token)
        except ModelError as exc:
            raise ParseError(str(exc), id_token.line, id_token.column) from exc
        equations.append(equation)
        equation_ids.add(id_token.text)

    if not equations:
        raise ParseError("empty model: no equations found")
    participating: set[str] = set()
    for equation in equations:
        participating.update(equation.participants)
    for name in declarations:
        if name not in participating:
            raise ParseError(
                f"variable {name!r} declared but participates in no equation",
                declaration_lines[name],
                1,
            )
    return build_system(equations, declarations)


def _format_attributes(attrs: VariableAttributes) -> str:
    parts = []
    if attrs.manipulativity is not DEFAULT_ATTRIBUTES.manipulativity:
        parts.append(f"manipulativity: {attrs.manipulativity.value}")
    if attrs.observability is not DEFAULT_ATTRIBUTES.observability:
        parts.append(f"observability: {attrs.observability.value}")
    if attrs.manipulation_cost is not None:
        parts.append(f"manipulation_cost: {_expr.format_number(attrs.manipulation_cost)}")
    if attrs.observation_cost is not None:
        parts.append(f"observation_cost: {_expr.format_number(attrs.observation_cost)}")
    return ", ".join(parts)


def serialize_equation(equation: Equation) -> str:
    """One canonical `.sem` line for an equation."""
    form = equation.explicit_form
    if form is not None:
        return f"{equation.id}: {form.lhs} = {_expr.to_text(form.rhs)}"
    return f"{equation.id}({', '.join(equation.participants)})"


def serialize_model(system: StructuralSystem) -> str:
    """Canonical document: declarations by name, equations by id, LF endings."""
    lines = []
    for name in system.variables:
        rendered = _format_attributes(system.attributes[name])
        if rendered:
            lines.append(f"var {name} {{ {rendered} }}")
    for equation in system.equations:
        lines.append(serialize_equation(equation))
    return "\n".join(lines) + "\n"


def evaluate_forward(system: StructuralSystem, ordering: OrderingResult) -> dict[str, float]:
    """Forward numeric evaluation along the causal ordering.

    A variable is valued iff its complete subset is a singleton whose
    equation is written in solved form for exactly that variable and all
    right-hand-side variables are already valued.  Everything else
    (strongly coupled blocks, residual variables, participation-only or
    reoriented equations) is simply absent from the result.
    """
    if set(ordering.graph.solve_order) != set(system.variables):
        raise ModelError("ordering does not match system")
    values: dict[str, float] = {}
    for subset in ordering.complete_subsets:
        if len(subset.equation_ids) != 1:
            continue
        (equation_id,) = subset.equation_ids
        (variable,) = subset.variable_ids
        form = system.equation(equation_id).explicit_form
        if form is None or form.lhs != variable:
            continue
        rhs_vars = _expr.free_variables(form.rhs)
        if not rhs_vars.issubset(values):
            continue
        values[variable] = _expr.evaluate(form.rhs, values, equation_id)
    return values
