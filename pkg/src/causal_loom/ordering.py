"""Classification and causal ordering of structural systems.

A system is over-constrained exactly when some equation subset touches
fewer variables than it has equations (Hall's condition fails), which a
maximum bipartite matching detects: the system is non-over-constrained
iff a matching saturates all equations.

Minimal self-contained subsets are computed from the matching: orient a
dependency edge from each equation to the equations determining its
other variables; a minimal self-contained subset is a strongly connected
component with no outgoing dependencies and no contact with an unmatched
(free) variable.  The ordering loop identifies these subsets, solves
them, substitutes their variables out of the remaining equations, and
repeats; whatever remains is the strictly under-constrained residual,
rendered with undirected arcs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .core import StructuralSystem, remove_equation
from .errors import ModelError, OverConstrainedError

Rows = dict[str, frozenset[str]]


class SystemClass(str, Enum):
    SELF_CONTAINED = "self-contained"
    UNDER_CONSTRAINED = "under-constrained"
    OVER_CONSTRAINED = "over-constrained"


class ArcKind(str, Enum):
    DIRECTED = "directed"
    BIDIRECTED = "bidirected"
    UNDIRECTED = "undirected"


@dataclass(frozen=True, order=True)
class Arc:
    tail: str
    head: str
    kind: ArcKind

    def __post_init__(self):
        if self.tail == self.head:
            raise ModelError(f"self-loop arc on {self.tail!r}")
        # symmetric kinds are stored once per unordered pair
        if self.kind is not ArcKind.DIRECTED and self.tail > self.head:
            raise ModelError(f"non-canonical {self.kind.value} arc {self.tail}->{self.head}")


@dataclass(frozen=True)
class CausalGraph:
    """One node per variable with its solve order (None = unresolved)."""

    solve_order: Mapping[str, int | None]
    arcs: frozenset[Arc]

    def __post_init__(self):
        for arc in self.arcs:
            if arc.tail not in self.solve_order or arc.head not in self.solve_order:
                raise ModelError(f"arc endpoint not a node: {arc}")

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self.solve_order))

    def parents(self, variable: str) -> frozenset[str]:
        return frozenset(
            a.tail for a in self.arcs if a.kind is ArcKind.DIRECTED and a.head == variable
        )


@dataclass(frozen=True)
class CompleteSubset:
    """A minimal self-contained subset identified at iteration ``order``."""

    order: int
    equation_ids: frozenset[str]
    variable_ids: frozenset[str]
    strongly_coupled: bool

    def __post_init__(self):
        if len(self.equation_ids) != len(self.variable_ids):
            raise ModelError("complete subset must be square")
        if self.strongly_coupled != (len(self.equation_ids) > 1):
            raise ModelError("strongly_coupled flag inconsistent with subset size")


@dataclass(frozen=True)
class OrderingResult:
    graph: CausalGraph
    complete_subsets: tuple[CompleteSubset, ...]
    residual_equation_ids: frozenset[str]
    system_class: SystemClass


def _participation(system: StructuralSystem) -> Rows:
    return {e.id: e.participant_set for e in system.equations}


def _maximum_matching(rows: Rows) -> dict[str, str]:
    """Hopcroft-Karp over the participation graph (equations to variables).

    Adjacency is explored in canonical order (equation ids, then variable
    names), so the returned matching is deterministic.
    """
    eq_ids = sorted(rows)
    adjacency = {e: sorted(rows[e]) for e in eq_ids}
    match_eq: dict[str, str] = {}
    match_var: dict[str, str] = {}
    INF = float("inf")
    dist: dict[str, float] = {}
    shortest = INF

    def bfs() -> bool:
        nonlocal shortest
        queue: deque[str] = deque()
        for e in eq_ids:
            if e not in match_eq:
                dist[e] = 0
                queue.append(e)
            else:
                dist[e] = INF
        shortest = INF
        while queue:
            e = queue.popleft()
            if dist[e] >= shortest:
                continue
            for v in adjacency[e]:
                other = match_var.get(v)
                if other is None:
                    shortest = min(shortest, dist[e] + 1)
                elif dist[other] == INF:
                    dist[other] = dist[e] + 1
                    queue.append(other)
        return shortest != INF

    def dfs(e: str) -> bool:
        for v in adjacency[e]:
            other = match_var.get(v)
            if other is None:
                if shortest == dist[e] + 1:
                    match_eq[e] = v
                    match_var[v] = e
                    return True
            elif dist[other] == dist[e] + 1 and dfs(other):
                match_eq[e] = v
                match_var[v] = e
                return True
        dist[e] = INF
        return False

    while bfs():
        for e in eq_ids:
            if e not in match_eq:
                dfs(e)
    return match_eq


def max_equation_matching(system: StructuralSystem) -> dict[str, str]:
    """Maximum-cardinality matching equation id -> variable (possibly partial)."""
    return _maximum_matching(_participation(system))


def _strongly_connected_components(
    nodes: list[str], successors: Mapping[str, list[str]]
) -> list[list[str]]:
    """Tarjan's algorithm; deterministic for deterministic inputs."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = iter(range(len(nodes) + 1_000_000))
    components: list[list[str]] = []

    def connect(v: str) -> None:
        index[v] = lowlink[v] = next(counter)
        stack.append(v)
        on_stack.add(v)
        for w in successors[v]:
            if w not in index:
                connect(w)
                lowlink[v] = min(lowlink[v], lowlink[w])
            elif w in on_stack:
                lowlink[v] = min(lowlink[v], index[w])
        if lowlink[v] == index[v]:
            component = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                component.append(w)
                if w == v:
                    break
            components.append(component)

    for v in nodes:
        if v not in index:
            connect(v)
    return components


def _minimal_subsets(rows: Rows) -> list[tuple[frozenset[str], frozenset[str]]]:
    """All minimal self-contained subsets of a non-over-constrained system.

    Returns (equation ids, variable ids) pairs sorted by smallest equation
    id.  Raises OverConstrainedError if the matching cannot saturate the
    equations.
    """
    matching = _maximum_matching(rows)
    if len(matching) != len(rows):
        raise OverConstrainedError("system is over-constrained")
    determined = {v: e for e, v in matching.items()}
    eq_ids = sorted(rows)
    successors: dict[str, list[str]] = {}
    touches_free: dict[str, bool] = {}
    for e in eq_ids:
        succ = []
        free = False
        for v in sorted(rows[e]):
            owner = determined.get(v)
            if owner is None:
                free = True
            elif owner != e:
                succ.append(owner)
        successors[e] = succ
        touches_free[e] = free

    subsets: list[tuple[frozenset[str], frozenset[str]]] = []
    for component in _strongly_connected_components(eq_ids, successors):
        members = set(component)
        if any(touches_free[e] for e in members):
            continue
        if any(s not in members for e in members for s in successors[e]):
            continue
        eqs = frozenset(members)
        variables = frozenset(matching[e] for e in members)
        subsets.append((eqs, variables))
    subsets.sort(key=lambda pair: min(pair[0]))
    return subsets


def classify(system: StructuralSystem) -> SystemClass:
    """Def.-2 classification via matching saturation (Hall's condition)."""
    matching = max_equation_matching(system)
    if len(matching) != system.m:
        return SystemClass.OVER_CONSTRAINED
    if system.m == system.n:
        return SystemClass.SELF_CONTAINED
    return SystemClass.UNDER_CONSTRAINED


def over_constraint_witness(
    system: StructuralSystem,
) -> tuple[frozenset[str], frozenset[str]] | None:
    """A subset with more equations than variables, or None.

    Taken as the alternating-path closure of an unmatched equation, which
    touches exactly one variable fewer than it has equations.
    """
    rows = _participation(system)
    matching = _maximum_matching(rows)
    unmatched = [e for e in sorted(rows) if e not in matching]
    if not unmatched:
        return None
    determined = {v: e for e, v in matching.items()}
    seen_eqs: set[str] = set()
    seen_vars: set[str] = set()
    queue: deque[str] = deque([unmatched[0]])
    seen_eqs.add(unmatched[0])
    while queue:
        e = queue.popleft()
        for v in sorted(rows[e]):
            if v in seen_vars:
                continue
            seen_vars.add(v)
            owner = determined.get(v)
            if owner is not None and owner not in seen_eqs:
                seen_eqs.add(owner)
                queue.append(owner)
    return frozenset(seen_eqs), frozenset(seen_vars)


def minimal_self_contained_subsets(system: StructuralSystem) -> list[CompleteSubset]:
    """Minimal self-contained subsets of the input (order 0 relative to it)."""
    subsets = _minimal_subsets(_participation(system))
    return [
        CompleteSubset(
            order=0,
            equation_ids=eqs,
            variable_ids=variables,
            strongly_coupled=len(eqs) > 1,
        )
        for eqs, variables in subsets
    ]


def derivation_trace(system: StructuralSystem) -> list[Rows]:
    """Reduced participation after each identify/solve/substitute pass.

    Index 0 is the input itself; the final entry is the strictly
    under-constrained residual (empty mapping if the system is
    self-contained).
    """
    rows = _participation(system)
    trace = [dict(rows)]
    while rows:
        subsets = _minimal_subsets(rows)
        if not subsets:
            break
        solved_eqs: set[str] = set()
        solved_vars: set[str] = set()
        for eqs, variables in subsets:
            solved_eqs.update(eqs)
            solved_vars.update(variables)
        rows = {
            e: participants - solved_vars
            for e, participants in rows.items()
            if e not in solved_eqs
        }
        trace.append(dict(rows))
    return trace


def _ordering_rounds(rows: Rows) -> Iterator[tuple[int, list[tuple[frozenset[str], frozenset[str]]], Rows]]:
    order = 0
    while rows:
        subsets = _minimal_subsets(rows)
        if not subsets:
            break
        yield order, subsets, rows
        solved_eqs = {e for eqs, _ in subsets for e in eqs}
        solved_vars = {v for _, variables in subsets for v in variables}
        rows = {
            e: participants - solved_vars
            for e, participants in rows.items()
            if e not in solved_eqs
        }
        order += 1
    if rows:
        yield -1, [], rows  # residual marker


def causal_ordering(system: StructuralSystem) -> OrderingResult:
    """Extended causal ordering producing one node per variable.

    Iteratively identifies complete subsets of increasing order; each
    subset's variables become nodes at that order, with directed arcs
    from the substituted-out variables of the subset's original
    equations.  Strongly coupled subsets additionally get pairwise
    bi-directed arcs.  Residual equations contribute directed arcs from
    their already-solved original variables into each remaining variable
    and pairwise undirected arcs among the remaining variables.
    """
    if classify(system) is SystemClass.OVER_CONSTRAINED:
        raise OverConstrainedError("causal ordering requires a non-over-constrained system")
    original = _participation(system)
    solve_order: dict[str, int | None] = {}
    arcs: set[Arc] = set()
    subsets_out: list[CompleteSubset] = []
    residual_ids: frozenset[str] = frozenset()

    for order, subsets, rows in _ordering_rounds(dict(original)):
        if order < 0:
            # strictly under-constrained residual
            residual_ids = frozenset(rows)
            for e in sorted(rows):
                remaining = rows[e]
                for v in sorted(remaining):
                    solve_order.setdefault(v, None)
                for parent in sorted(original[e] - remaining):
                    for v in sorted(remaining):
                        arcs.add(Arc(parent, v, ArcKind.DIRECTED))
                ordered = sorted(remaining)
                for i, a in enumerate(ordered):
                    for b in ordered[i + 1 :]:
                        arcs.add(Arc(a, b, ArcKind.UNDIRECTED))
            continue
        for eqs, variables in subsets:
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
            outside = frozenset().union(*(original[e] for e in eqs)) - variables
            for parent in sorted(outside):
                for v in sorted(variables):
                    arcs.add(Arc(parent, v, ArcKind.DIRECTED))
            ordered = sorted(variables)
            for i, a in enumerate(ordered):
                for b in ordered[i + 1 :]:
                    arcs.add(Arc(a, b, ArcKind.BIDIRECTED))

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


def release_candidates(system: StructuralSystem) -> list[tuple[str, bool]]:
    """Every equation of an over-constrained system, flagged by whether
    removing it restores non-over-constraint."""
    if classify(system) is not SystemClass.OVER_CONSTRAINED:
        raise ModelError("release candidates are defined only for over-constrained systems")
    candidates = []
    for e in system.equations:
        reduced = remove_equation(system, e.id)
        candidates.append((e.id, classify(reduced) is not SystemClass.OVER_CONSTRAINED))
    return candidates
