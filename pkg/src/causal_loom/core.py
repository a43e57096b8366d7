"""Variables, equations, and structural systems.

A structural system is an ordered collection of equations (causal
mechanisms) over named variables.  Structure is qualitative: the system
records which variables participate in which equations; explicit
algebraic forms are optional payloads used only for numeric evaluation.
Everything is immutable; mutation operations return new systems, and the
canonical ordering (equations by id, variables by name) makes all
derived output reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from . import expr as _expr
from .errors import ModelError
from .expr import Expression

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED_NAMES = frozenset({"var"})


def check_name(name: str, what: str = "variable") -> str:
    """Validate an identifier (letters, digits, underscore; no leading digit)."""
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ModelError(f"invalid {what} name {name!r}")
    if name in _RESERVED_NAMES:
        raise ModelError(f"{name!r} is a reserved word and cannot name a {what}")
    return name


class Manipulativity(str, Enum):
    TRULY_EXOGENOUS = "truly-exogenous"
    MANIPULATABLE = "manipulatable"
    TRULY_ENDOGENOUS = "truly-endogenous"


class Observability(str, Enum):
    OBSERVABLE = "observable"
    UNOBSERVABLE = "unobservable"


@dataclass(frozen=True)
class VariableAttributes:
    manipulativity: Manipulativity = Manipulativity.MANIPULATABLE
    observability: Observability = Observability.OBSERVABLE
    manipulation_cost: float | None = None
    observation_cost: float | None = None

    def __post_init__(self):
        for label, cost in (
            ("manipulation_cost", self.manipulation_cost),
            ("observation_cost", self.observation_cost),
        ):
            if cost is not None and (not math.isfinite(cost) or cost < 0):
                raise ModelError(f"{label} must be finite and >= 0, got {cost!r}")


DEFAULT_ATTRIBUTES = VariableAttributes()


class EquationKind(str, Enum):
    CORE = "core"
    VALUE_ASSIGNMENT = "value-assignment"


@dataclass(frozen=True)
class ExplicitForm:
    """An equation written in solved form: ``lhs = rhs``."""

    lhs: str
    rhs: Expression


@dataclass(frozen=True)
class Equation:
    """One causal mechanism: an (optionally explicit) relation over variables.

    ``participants`` is an ordered, duplicate-free tuple.  For explicit
    equations it is normalized to the left-hand side followed by the
    right-hand side variables in order of first appearance.
    """

    id: str
    participants: tuple[str, ...]
    kind: EquationKind = EquationKind.CORE
    explicit_form: ExplicitForm | None = None

    def __post_init__(self):
        check_name(self.id, "equation")
        if not self.participants:
            raise ModelError(f"equation {self.id}: empty participant list")
        for name in self.participants:
            check_name(name)
        form = self.explicit_form
        if form is not None:
            rhs_vars = _expr.variables_in_order(form.rhs)
            normalized = (form.lhs,) + tuple(v for v in rhs_vars if v != form.lhs)
            if set(normalized) != set(self.participants):
                raise ModelError(
                    f"equation {self.id}: explicit form variables "
                    f"{sorted(set(normalized))} do not match participants "
                    f"{sorted(set(self.participants))}"
                )
            object.__setattr__(self, "participants", normalized)
            if not rhs_vars:
                # a closed rhs assigns a constant: canonically a value assignment
                object.__setattr__(self, "kind", EquationKind.VALUE_ASSIGNMENT)
        else:
            if len(set(self.participants)) != len(self.participants):
                raise ModelError(f"equation {self.id}: duplicate participants")
        if self.kind is EquationKind.VALUE_ASSIGNMENT:
            if len(self.participants) != 1:
                raise ModelError(
                    f"equation {self.id}: value assignment must have exactly one participant"
                )
            if form is None or form.lhs != self.participants[0] or _expr.free_variables(form.rhs):
                raise ModelError(
                    f"equation {self.id}: value assignment must assign a constant "
                    f"to its sole participant"
                )

    @property
    def participant_set(self) -> frozenset[str]:
        return frozenset(self.participants)


def value_assignment(equation_id: str, variable: str, value: float) -> Equation:
    """Convenience constructor for ``f: V = <constant>``."""
    return Equation(
        id=equation_id,
        participants=(variable,),
        kind=EquationKind.VALUE_ASSIGNMENT,
        explicit_form=ExplicitForm(variable, _expr.Const(value)),
    )


def explicit_equation(equation_id: str, lhs: str, rhs: Expression) -> Equation:
    """Convenience constructor for ``f: lhs = rhs`` with derived participants."""
    participants = (lhs,) + tuple(v for v in _expr.variables_in_order(rhs) if v != lhs)
    return Equation(
        id=equation_id,
        participants=participants,
        explicit_form=ExplicitForm(lhs, rhs),
    )


@dataclass(frozen=True)
class SubsetCounts:
    """Equation count and distinct-variable count of an equation subset."""

    ne: int
    nv: int


@dataclass(frozen=True)
class StructuralSystem:
    """A set of mechanisms over variables, with per-variable attributes.

    Equations are stored sorted by id; the variable set is exactly the
    union of participants (no isolated variables).  Construct through
    :func:`build_system`.
    """

    equations: tuple[Equation, ...]
    attributes: Mapping[str, VariableAttributes] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.equations)

    @property
    def n(self) -> int:
        return len(self.attributes)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(self.attributes))

    @property
    def equation_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.equations)

    def equation(self, equation_id: str) -> Equation:
        for e in self.equations:
            if e.id == equation_id:
                return e
        raise ModelError(f"unknown equation id {equation_id!r}")

    def has_variable(self, name: str) -> bool:
        return name in self.attributes


def build_system(
    equations: Iterable[Equation],
    attributes: Mapping[str, VariableAttributes] | None = None,
) -> StructuralSystem:
    """Assemble a structural system from equations plus optional attributes.

    The variable set is the union of all participants; variables without a
    declared attribute entry default to manipulatable and observable.
    Declared attributes for variables that participate nowhere are rejected
    (no isolated variables).
    """
    eqs = tuple(sorted(equations, key=lambda e: e.id))
    if not eqs:
        raise ModelError("empty system rejected: at least one equation required")
    seen: set[str] = set()
    for e in eqs:
        if e.id in seen:
            raise ModelError(f"duplicate equation id {e.id!r}")
        seen.add(e.id)
    variables: set[str] = set()
    for e in eqs:
        variables.update(e.participants)
    attrs = dict(attributes or {})
    for name in attrs:
        if name not in variables:
            raise ModelError(f"variable {name!r} declared but participates in no equation")
    full_attrs = {name: attrs.get(name, DEFAULT_ATTRIBUTES) for name in sorted(variables)}
    return StructuralSystem(equations=eqs, attributes=full_attrs)


def subset_counts(system: StructuralSystem, ids: Iterable[str]) -> SubsetCounts:
    """ne and nv of the equation subset named by ids."""
    ids = set(ids)
    known = set(system.equation_ids)
    unknown = ids - known
    if unknown:
        raise ModelError(f"unknown equation id(s): {sorted(unknown)}")
    variables: set[str] = set()
    for e in system.equations:
        if e.id in ids:
            variables.update(e.participants)
    return SubsetCounts(ne=len(ids), nv=len(variables))


def _rewrite_expr(node: Expression, mapping: Mapping[str, str]) -> Expression:
    if isinstance(node, _expr.Var):
        return _expr.Var(mapping.get(node.name, node.name))
    if isinstance(node, _expr.Neg):
        return _expr.Neg(_rewrite_expr(node.operand, mapping))
    if isinstance(node, _expr.BinOp):
        return _expr.BinOp(
            node.op,
            _rewrite_expr(node.left, mapping),
            _rewrite_expr(node.right, mapping),
        )
    return node


def rewrite_equation(e: Equation, mapping: Mapping[str, str]) -> Equation:
    """Substitute variable names throughout one equation."""
    participants: list[str] = []
    for name in e.participants:
        new = mapping.get(name, name)
        if new not in participants:
            participants.append(new)
    form = e.explicit_form
    if form is not None:
        form = ExplicitForm(mapping.get(form.lhs, form.lhs), _rewrite_expr(form.rhs, mapping))
    if not participants:
        raise ModelError(f"equation {e.id}: rewrite left an empty participant set")
    return Equation(id=e.id, participants=tuple(participants), kind=e.kind, explicit_form=form)


def rename_variable(system: StructuralSystem, old: str, new: str) -> StructuralSystem:
    """Rename a variable everywhere: participants, explicit forms, attributes."""
    if not system.has_variable(old):
        raise ModelError(f"unknown variable {old!r}")
    check_name(new)
    if system.has_variable(new):
        raise ModelError(f"variable name {new!r} already in use")
    mapping = {old: new}
    equations = tuple(rewrite_equation(e, mapping) for e in system.equations)
    attrs = {mapping.get(name, name): a for name, a in system.attributes.items()}
    return build_system(equations, attrs)


def merge_variables(system: StructuralSystem, source: str, target: str) -> StructuralSystem:
    """Replace every occurrence of source by target; target's attributes win."""
    for name in (source, target):
        if not system.has_variable(name):
            raise ModelError(f"unknown variable {name!r}")
    if source == target:
        raise ModelError(f"cannot merge {source!r} into itself")
    mapping = {source: target}
    equations = tuple(rewrite_equation(e, mapping) for e in system.equations)
    attrs = {name: a for name, a in system.attributes.items() if name != source}
    return build_system(equations, attrs)


def remove_equation(system: StructuralSystem, equation_id: str) -> StructuralSystem:
    """Drop one equation; variables left with no equation disappear with it."""
    system.equation(equation_id)
    remaining = tuple(e for e in system.equations if e.id != equation_id)
    if not remaining:
        raise ModelError("removing the last equation would leave an empty system")
    surviving = set()
    for e in remaining:
        surviving.update(e.participants)
    attrs = {name: a for name, a in system.attributes.items() if name in surviving}
    return build_system(remaining, attrs)


def add_equation(
    system: StructuralSystem | None,
    equation: Equation,
    attributes: Mapping[str, VariableAttributes] | None = None,
) -> StructuralSystem:
    """Add one equation.  ``attributes`` applies to newly introduced
    variables only; existing declarations always win."""
    if system is None:
        new_attrs = {
            name: (attributes or {}).get(name, DEFAULT_ATTRIBUTES)
            for name in equation.participants
        }
        return build_system((equation,), new_attrs)
    if equation.id in set(system.equation_ids):
        raise ModelError(f"duplicate equation id {equation.id!r}")
    merged = dict(system.attributes)
    for name in equation.participants:
        if name not in merged:
            merged[name] = (attributes or {}).get(name, DEFAULT_ATTRIBUTES)
    return build_system(system.equations + (equation,), merged)


def structure_matrix(
    system: StructuralSystem,
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[tuple[bool, ...], ...]]:
    """Qualitative incidence view: (equation ids, variable names, marker rows)."""
    eq_ids = system.equation_ids
    var_names = system.variables
    rows = tuple(
        tuple(name in e.participant_set for name in var_names) for e in system.equations
    )
    return eq_ids, var_names, rows


def unused_suffix_name(base: str, taken: Iterable[str]) -> str:
    """Collision-resolution scheme: smallest unused decimal suffix."""
    taken = set(taken)
    k = 0
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"
