"""Expression trees for explicit equation forms.

Supported nodes: finite constants, variable references, the four binary
arithmetic operators and unary negation.  Parentheses exist only in the
text syntax; the tree encodes grouping structurally.  A negated numeric
literal folds into the constant (``-5`` is ``Const(-5.0)``), so that form
is canonical; ``Neg`` wraps everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import EvaluationError, ModelError

BINARY_OPS = ("+", "-", "*", "/")


@dataclass(frozen=True)
class Const:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ModelError(f"constant must be finite, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expression"
    right: "Expression"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ModelError(f"unknown operator {self.op!r}")


Expression = Union[Const, Var, Neg, BinOp]


def variables_in_order(expr: Expression) -> tuple[str, ...]:
    """Free variables in left-to-right order of first appearance."""
    seen: dict[str, None] = {}

    def walk(node: Expression) -> None:
        if isinstance(node, Var):
            seen.setdefault(node.name)
        elif isinstance(node, Neg):
            walk(node.operand)
        elif isinstance(node, BinOp):
            walk(node.left)
            walk(node.right)

    walk(expr)
    return tuple(seen)


def free_variables(expr: Expression) -> frozenset[str]:
    return frozenset(variables_in_order(expr))


def evaluate(expr: Expression, env: Mapping[str, float], equation_id: str | None = None) -> float:
    """Evaluate against an environment of variable values.

    Raises EvaluationError on division by zero, non-finite intermediates,
    and unbound variables.
    """
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        if expr.name not in env:
            raise EvaluationError(f"unbound variable {expr.name}", equation_id)
        return env[expr.name]
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, env, equation_id)
    left = evaluate(expr.left, env, equation_id)
    right = evaluate(expr.right, env, equation_id)
    if expr.op == "+":
        result = left + right
    elif expr.op == "-":
        result = left - right
    elif expr.op == "*":
        result = left * right
    else:
        if right == 0.0:
            raise EvaluationError("division by zero", equation_id)
        result = left / right
    if not math.isfinite(result):
        raise EvaluationError("non-finite intermediate result", equation_id)
    return result


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _precedence(expr: Expression) -> int:
    if isinstance(expr, BinOp):
        return _PRECEDENCE[expr.op]
    return 3


def format_number(value: float) -> str:
    """Shortest round-trip decimal; integral values without a fraction."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_text(expr: Expression) -> str:
    """Canonical text with minimal parentheses."""
    if isinstance(expr, Const):
        return format_number(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Neg):
        inner = to_text(expr.operand)
        if isinstance(expr.operand, BinOp):
            inner = f"({inner})"
        return f"-{inner}"
    prec = _PRECEDENCE[expr.op]
    left = to_text(expr.left)
    if _precedence(expr.left) < prec:
        left = f"({left})"
    right = to_text(expr.right)
    # parsing is left-associative, so an equal-precedence right operand
    # needs parentheses to reparse with the same shape
    if _precedence(expr.right) <= prec:
        right = f"({right})"
    return f"{left} {expr.op} {right}"
