"""Definition-driven reference implementation of classification and ordering.

Everything here works by literal enumeration of equation subsets, with no
matching and no graph condensation, so it can serve as an independent
check of the efficient engine.  Exponential in the equation count; only
for small systems (tests).
"""

from __future__ import annotations

from itertools import combinations

from .core import StructuralSystem
from .errors import ModelError, OverConstrainedError
from .ordering import (
    Arc,
    ArcKind,
    CausalGraph,
    CompleteSubset,
    OrderingResult,
    SystemClass,
)

MAX_ORACLE_EQUATIONS = 12


def _check_size(system: StructuralSystem) -> None:
    if system.m > MAX_ORACLE_EQUATIONS:
        raise ModelError(
            f"brute-force oracle limited to {MAX_ORACLE_EQUATIONS} equations, got {system.m}"
        )


def _subset_variables(rows: dict[str, frozenset[str]], ids: tuple[str, ...]) -> frozenset[str]:
    variables: set[str] = set()
    for e in ids:
        variables |= rows[e]
    return frozenset(variables)


def brute_force_classify(system: StructuralSystem) -> SystemClass:
    """Check every equation subset against the defining counting property."""
    _check_size(system)
    rows = {e.id: e.participant_set for e in system.equations}
    ids = sorted(rows)
    for k in range(1, len(ids) + 1):
        for subset in combinations(ids, k):
            if len(_subset_variables(rows, subset)) < k:
                return SystemClass.OVER_CONSTRAINED
    if system.m == system.n:
        return SystemClass.SELF_CONTAINED
    return SystemClass.UNDER_CONSTRAINED


def _minimal_square_subsets(rows: dict[str, frozenset[str]]) -> list[tuple[frozenset[str], frozenset[str]]]:
    ids = sorted(rows)
    squares: list[tuple[frozenset[str], frozenset[str]]] = []
    for k in range(1, len(ids) + 1):
        for subset in combinations(ids, k):
            variables = _subset_variables(rows, subset)
            if len(variables) == k:
                squares.append((frozenset(subset), variables))
    minimal = []
    for eqs, variables in squares:
        if not any(other < eqs for other, _ in squares):
            minimal.append((eqs, variables))
    minimal.sort(key=lambda pair: min(pair[0]))
    return minimal


def brute_force_ordering(system: StructuralSystem) -> OrderingResult:
    """Same contract as causal_ordering, by exhaustive subset enumeration."""
    _check_size(system)
    if brute_force_classify(system) is SystemClass.OVER_CONSTRAINED:
        raise OverConstrainedError("causal ordering requires a non-over-constrained system")
    original = {e.id: e.participant_set for e in system.equations}
    rows = dict(original)
    solve_order: dict[str, int | None] = {}
    arcs: set[Arc] = set()
    subsets_out: list[CompleteSubset] = []

    order = 0
    while rows:
        found = _minimal_square_subsets(rows)
        if not found:
            break
        solved_vars: set[str] = set()
        solved_eqs: set[str] = set()
        for eqs, variables in found:
            subsets_out.append(
                CompleteSubset(
                    order=order,
                    equation_ids=eqs,
                    variable_ids=variables,
                    strongly_coupled=len(eqs) > 1,
                )
            )
            for v in variables:
                solve_order[v] = order
            outside = _subset_variables(original, tuple(eqs)) - variables
            for parent in outside:
                for v in variables:
                    arcs.add(Arc(parent, v, ArcKind.DIRECTED))
            for a in variables:
                for b in variables:
                    if a < b:
                        arcs.add(Arc(a, b, ArcKind.BIDIRECTED))
            solved_eqs |= eqs
            solved_vars |= variables
        rows = {
            e: participants - solved_vars
            for e, participants in rows.items()
            if e not in solved_eqs
        }
        order += 1

    residual_ids = frozenset(rows)
    for e, remaining in rows.items():
        for v in remaining:
            solve_order.setdefault(v, None)
        for parent in original[e] - remaining:
            for v in remaining:
                arcs.add(Arc(parent, v, ArcKind.DIRECTED))
        for a in remaining:
            for b in remaining:
                if a < b:
                    arcs.add(Arc(a, b, ArcKind.UNDIRECTED))

    subsets_out.sort(key=lambda s: (s.order, min(s.equation_ids)))
    graph = CausalGraph(solve_order=dict(sorted(solve_order.items())), arcs=frozenset(arcs))
    system_class = (
        SystemClass.UNDER_CONSTRAINED if residual_ids else SystemClass.SELF_CONTAINED
    )
    return OrderingResult(
        graph=graph,
        complete_subsets=tuple(subsets_out),
        residual_equation_ids=residual_ids,
        system_class=system_class,
    )
