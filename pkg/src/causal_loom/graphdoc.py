"""Graph interchange: JSON document and DOT rendering of an ordering result.

Both renderings are built from the same data and list nodes and arcs in
canonical order, so equal orderings produce byte-identical output.
"""

from __future__ import annotations

import json
from typing import Mapping

from .core import StructuralSystem, VariableAttributes
from .ordering import Arc, ArcKind, OrderingResult, SystemClass


def _attributes_entry(attrs: VariableAttributes) -> dict:
    return {
        "manipulativity": attrs.manipulativity.value,
        "observability": attrs.observability.value,
        "manipulation_cost": attrs.manipulation_cost,
        "observation_cost": attrs.observation_cost,
    }


def _sorted_arcs(arcs) -> list[Arc]:
    return sorted(arcs, key=lambda a: (a.tail, a.head, a.kind.value))


def graph_document(
    ordering: OrderingResult | None,
    attributes: Mapping[str, VariableAttributes] | None = None,
) -> dict:
    """JSON-ready rendering of an ordering result.

    ``ordering=None`` describes an empty workspace, which counts as
    (vacuously) self-contained.
    """
    if ordering is None:
        return {"class": SystemClass.SELF_CONTAINED.value, "nodes": [], "arcs": [], "residual": []}
    attributes = attributes or {}
    nodes = [
        {
            "name": name,
            "solve_order": ordering.graph.solve_order[name],
            "attributes": _attributes_entry(attributes[name])
            if name in attributes
            else None,
        }
        for name in ordering.graph.nodes
    ]
    arcs = [
        {"tail": a.tail, "head": a.head, "kind": a.kind.value}
        for a in _sorted_arcs(ordering.graph.arcs)
    ]
    return {
        "class": ordering.system_class.value,
        "nodes": nodes,
        "arcs": arcs,
        "residual": sorted(ordering.residual_equation_ids),
    }


def document_for_system(system: StructuralSystem, ordering: OrderingResult) -> dict:
    return graph_document(ordering, system.attributes)


def to_json(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


_DOT_STYLE = {
    ArcKind.DIRECTED.value: "",
    ArcKind.BIDIRECTED.value: " [dir=both]",
    ArcKind.UNDIRECTED.value: " [dir=none]",
}


def to_dot(document: dict, name: str = "causal_model") -> str:
    """DOT text for the same graph the JSON document describes."""
    lines = [f"// class: {document['class']}", f"digraph {name} {{"]
    for node in document["nodes"]:
        order = node["solve_order"]
        label = node["name"] if order is None else f"{node['name']} ({order})"
        lines.append(f'  "{node["name"]}" [label="{label}"];')
    for arc in document["arcs"]:
        lines.append(f'  "{arc["tail"]}" -> "{arc["head"]}"{_DOT_STYLE[arc["kind"]]};')
    lines.append("}")
    return "\n".join(lines) + "\n"
