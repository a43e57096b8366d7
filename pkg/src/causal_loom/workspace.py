"""The live model-building session.

A workspace holds a structural system, provenance (which KB mechanism an
equation came from), and the causal ordering, which is recomputed after
every applied action.  The system a workspace exposes is never
over-constrained: an action that would over-constrain it is *held* as a
pending state carrying the hypothetical system and its release
candidates; only releasing a valid candidate commits the action, and
cancel drops it, restoring the exact pre-action state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from . import core as _core
from .core import Equation, EquationKind, Manipulativity, StructuralSystem
from .dsl import parse_model, serialize_model
from .errors import WorkspaceError
from .kb import KbPath, KnowledgeBase, Mechanism, format_kb_path, kb_get, kb_put, parse_kb_path
from .ordering import OrderingResult, SystemClass, causal_ordering, classify, release_candidates


class ActionStatus(str, Enum):
    APPLIED = "applied"
    NEEDS_RELEASE = "needs-release"
    REJECTED = "rejected"


@dataclass(frozen=True)
class ReleaseCandidate:
    equation_id: str
    valid: bool


@dataclass(frozen=True)
class PendingOverConstraint:
    """An action held back because it would over-constrain the system."""

    description: str
    held_system: StructuralSystem
    held_provenance: Mapping[str, KbPath | None]
    candidates: tuple[ReleaseCandidate, ...]


@dataclass(frozen=True)
class Workspace:
    """system/ordering are None only for a freshly created empty session."""

    system: StructuralSystem | None = None
    provenance: Mapping[str, KbPath | None] = field(default_factory=dict)
    ordering: OrderingResult | None = None
    pending: PendingOverConstraint | None = None


@dataclass(frozen=True)
class ActionResult:
    status: ActionStatus
    workspace: Workspace
    reason: str | None = None
    candidates: tuple[ReleaseCandidate, ...] | None = None
    warnings: tuple[str, ...] = ()


def ws_new(system: StructuralSystem | None = None) -> Workspace:
    if system is None:
        return Workspace()
    ordering = causal_ordering(system)
    provenance = {e.id: None for e in system.equations}
    return Workspace(system=system, provenance=provenance, ordering=ordering)


def ws_from_model(text: str) -> Workspace:
    return ws_new(parse_model(text))


def _applied(
    system: StructuralSystem,
    provenance: Mapping[str, KbPath | None],
    warnings: tuple[str, ...] = (),
) -> ActionResult:
    ws = Workspace(
        system=system,
        provenance=dict(provenance),
        ordering=causal_ordering(system),
    )
    return ActionResult(status=ActionStatus.APPLIED, workspace=ws, warnings=warnings)


def _needs_release(
    ws: Workspace,
    description: str,
    held_system: StructuralSystem,
    held_provenance: Mapping[str, KbPath | None],
) -> ActionResult:
    candidates = tuple(
        ReleaseCandidate(equation_id, valid)
        for equation_id, valid in release_candidates(held_system)
    )
    pending = PendingOverConstraint(
        description=description,
        held_system=held_system,
        held_provenance=dict(held_provenance),
        candidates=candidates,
    )
    return ActionResult(
        status=ActionStatus.NEEDS_RELEASE,
        workspace=replace(ws, pending=pending),
        candidates=candidates,
    )


def _rejected(ws: Workspace, reason: str) -> ActionResult:
    return ActionResult(status=ActionStatus.REJECTED, workspace=ws, reason=reason)


def _require_not_pending(ws: Workspace) -> str | None:
    if ws.pending is not None:
        return "an over-constraining action is pending; release or cancel first"
    return None


_SERIES_ID_RE = re.compile(r"f(\d+)\Z")


def next_equation_id(system: StructuralSystem | None) -> str:
    """Next id in the f<k> series, one past the numerically largest in use."""
    highest = 0
    for equation_id in () if system is None else system.equation_ids:
        match = _SERIES_ID_RE.match(equation_id)
        if match:
            highest = max(highest, int(match.group(1)))
    return f"f{highest + 1}"


def _fresh_equation_id(system: StructuralSystem | None, preferred: str) -> str:
    taken = set() if system is None else set(system.equation_ids)
    if preferred not in taken:
        return preferred
    return next_equation_id(system)


def ws_add_mechanism(ws: Workspace, kb: KnowledgeBase, path: str | KbPath) -> ActionResult:
    """Copy a KB mechanism into the workspace.

    Core mechanisms keep their variables distinct: any participant name
    already present in the workspace is renamed with the smallest unused
    decimal suffix.  Value-assignment mechanisms designate a value for the
    variable itself, so they bind to the existing variable when there is
    one, which can over-constrain the system and trigger the release flow.
    """
    blocked = _require_not_pending(ws)
    if blocked:
        return _rejected(ws, blocked)
    path = parse_kb_path(path)
    mechanism = kb_get(kb, path)
    system = ws.system
    equation_id = _fresh_equation_id(system, mechanism.name)
    warnings: list[str] = []

    if mechanism.equation.kind is EquationKind.VALUE_ASSIGNMENT:
        variable = mechanism.equation.participants[0]
        equation = replace(mechanism.equation, id=equation_id)
        if system is not None and system.has_variable(variable):
            theirs = mechanism.attributes.get(variable)
            ours = system.attributes[variable]
            if theirs is not None and theirs != ours:
                warnings.append(
                    f"variable {variable}: keeping workspace attributes over "
                    f"mechanism declaration from {format_kb_path(path)}"
                )
        new_system = _core.add_equation(system, equation, mechanism.attributes)
        provenance = dict(ws.provenance)
        provenance[equation_id] = path
        if classify(new_system) is SystemClass.OVER_CONSTRAINED:
            return _needs_release(
                ws, f"add mechanism {format_kb_path(path)}", new_system, provenance
            )
        return _applied(new_system, provenance, tuple(warnings))

    taken = set() if system is None else set(system.variables)
    renames: dict[str, str] = {}
    for name in mechanism.participants:
        if name in taken:
            fresh = _core.unused_suffix_name(name, taken)
            renames[name] = fresh
            taken.add(fresh)
        else:
            taken.add(name)
    equation = replace(mechanism.equation, id=equation_id)
    if renames:
        equation = _core.rewrite_equation(equation, renames)
    attributes = {
        renames.get(name, name): attrs for name, attrs in mechanism.attributes.items()
    }
    new_system = _core.add_equation(system, equation, attributes)
    provenance = dict(ws.provenance)
    provenance[equation_id] = path
    return _applied(new_system, provenance)


def ws_merge_variables(ws: Workspace, source: str, target: str) -> ActionResult:
    blocked = _require_not_pending(ws)
    if blocked:
        return _rejected(ws, blocked)
    if ws.system is None:
        raise WorkspaceError("workspace is empty")
    for name in (source, target):
        if not ws.system.has_variable(name):
            raise WorkspaceError(f"unknown variable {name!r}")
    merged = _core.merge_variables(ws.system, source, target)
    if classify(merged) is SystemClass.OVER_CONSTRAINED:
        return _needs_release(ws, f"merge {source} into {target}", merged, ws.provenance)
    return _applied(merged, ws.provenance)


def ws_set_exogenous(ws: Workspace, variable: str, value: float) -> ActionResult:
    blocked = _require_not_pending(ws)
    if blocked:
        return _rejected(ws, blocked)
    if ws.system is None or not ws.system.has_variable(variable):
        raise WorkspaceError(f"unknown variable {variable!r}")
    attrs = ws.system.attributes[variable]
    if attrs.manipulativity is Manipulativity.TRULY_ENDOGENOUS:
        return _rejected(ws, f"variable {variable} is truly endogenous and cannot be set")
    equation_id = next_equation_id(ws.system)
    equation = _core.value_assignment(equation_id, variable, value)
    new_system = _core.add_equation(ws.system, equation)
    provenance = dict(ws.provenance)
    provenance[equation_id] = None
    if classify(new_system) is SystemClass.OVER_CONSTRAINED:
        return _needs_release(
            ws, f"set {variable} exogenous ({equation_id})", new_system, provenance
        )
    return _applied(new_system, provenance)


def _release_would_endogenize_truly_exogenous(
    held: StructuralSystem, equation: Equation
) -> str | None:
    if equation.kind is not EquationKind.VALUE_ASSIGNMENT:
        return None
    variable = equation.participants[0]
    if held.attributes[variable].manipulativity is not Manipulativity.TRULY_EXOGENOUS:
        return None
    return (
        f"equation {equation.id} assigns the truly exogenous variable {variable}; "
        f"releasing it would make {variable} endogenous"
    )


def ws_release_equation(ws: Workspace, equation_id: str) -> ActionResult:
    pending = ws.pending
    if pending is None:
        raise WorkspaceError("no pending over-constraint to release for")
    by_id = {c.equation_id: c for c in pending.candidates}
    candidate = by_id.get(equation_id)
    if candidate is None:
        raise WorkspaceError(f"unknown equation id {equation_id!r}")
    if not candidate.valid:
        return _rejected(
            ws, f"releasing {equation_id} would leave the system over-constrained"
        )
    equation = pending.held_system.equation(equation_id)
    veto = _release_would_endogenize_truly_exogenous(pending.held_system, equation)
    if veto:
        return _rejected(ws, veto)
    new_system = _core.remove_equation(pending.held_system, equation_id)
    provenance = {
        eid: p for eid, p in pending.held_provenance.items() if eid != equation_id
    }
    return _applied(new_system, provenance)


def ws_cancel_pending(ws: Workspace) -> ActionResult:
    if ws.pending is None:
        raise WorkspaceError("nothing pending to cancel")
    return ActionResult(status=ActionStatus.APPLIED, workspace=replace(ws, pending=None))


def ws_extract(
    ws: Workspace,
    variables: Iterable[str],
    kb: KnowledgeBase,
    dest: str | KbPath,
) -> KnowledgeBase:
    """Copy every equation fully contained in `variables` into the KB.

    Boundary equations (any participant outside the selection) are
    skipped rather than truncated.  The workspace itself is unchanged.
    """
    if ws.pending is not None:
        raise WorkspaceError("an over-constraining action is pending; release or cancel first")
    if ws.system is None:
        raise WorkspaceError("workspace is empty")
    selection = set(variables)
    unknown = selection - set(ws.system.variables)
    if unknown:
        raise WorkspaceError(f"unknown variable(s): {sorted(unknown)}")
    chosen = [
        e for e in ws.system.equations if set(e.participants) <= selection
    ]
    if not chosen:
        raise WorkspaceError("no equation is fully contained in the selected variables")
    dest = parse_kb_path(dest)
    for equation in chosen:
        mechanism = Mechanism(
            equation=equation,
            attributes={
                name: ws.system.attributes[name] for name in equation.participants
            },
        )
        kb = kb_put(kb, dest, mechanism)
    return kb


_PROVENANCE_LINE = re.compile(r"#\s*provenance\s+(\S+)\s*=\s*(\S+)\s*\Z")


def ws_save(ws: Workspace) -> str:
    """Snapshot as canonical `.sem` text plus a provenance comment sidecar.

    Only consistent states are serializable; pending actions are
    transient and must be released or cancelled first.
    """
    if ws.pending is not None:
        raise WorkspaceError("cannot snapshot a workspace with a pending action")
    if ws.system is None:
        return ""
    text = serialize_model(ws.system)
    sidecar = [
        f"# provenance {equation_id} = {format_kb_path(path)}"
        for equation_id, path in sorted(ws.provenance.items())
        if path
    ]
    if sidecar:
        text += "\n".join(sidecar) + "\n"
    return text


def ws_load(text: str) -> Workspace:
    if not text.strip():
        return Workspace()
    system = parse_model(text)
    provenance: dict[str, KbPath | None] = {e.id: None for e in system.equations}
    for raw in text.splitlines():
        match = _PROVENANCE_LINE.match(raw.strip())
        if match:
            equation_id, path = match.group(1), match.group(2)
            if equation_id not in provenance:
                raise WorkspaceError(
                    f"provenance for unknown equation {equation_id!r}"
                )
            provenance[equation_id] = parse_kb_path(path)
    ws = ws_new(system)
    return replace(ws, provenance=provenance)
