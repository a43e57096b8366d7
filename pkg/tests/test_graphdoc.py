import json
import re

from hypothesis import given, strategies as st

from causal_loom.graphdoc import document_for_system, graph_document, to_dot, to_json
from causal_loom.ordering import causal_ordering

from gensys import random_non_over_constrained

_EDGE_RE = re.compile(r'"(\w+)" -> "(\w+)"(?: \[dir=(\w+)\])?;')
_NODE_RE = re.compile(r'"(\w+)" \[label="([^"]*)"\];')


def parse_dot(text: str):
    nodes = {name: label for name, label in _NODE_RE.findall(text)}
    arcs = set()
    for tail, head, dir_attr in _EDGE_RE.findall(text):
        kind = {"": "directed", "both": "bidirected", "none": "undirected"}[dir_attr]
        arcs.add((tail, head, kind))
    return nodes, arcs


def test_document_fields(extended_system):
    document = document_for_system(extended_system, causal_ordering(extended_system))
    assert document["class"] == "under-constrained"
    assert document["residual"] == ["f7"]
    names = [node["name"] for node in document["nodes"]]
    assert names == sorted(names)
    undirected = [a for a in document["arcs"] if a["kind"] == "undirected"]
    assert undirected == [{"tail": "CS", "head": "TL", "kind": "undirected"}]
    by_name = {node["name"]: node for node in document["nodes"]}
    assert by_name["CS"]["solve_order"] is None
    assert by_name["NS"]["solve_order"] == 0
    assert by_name["NS"]["attributes"]["manipulativity"] == "manipulatable"


def test_empty_document():
    document = graph_document(None)
    assert document == {"class": "self-contained", "nodes": [], "arcs": [], "residual": []}


def test_dot_and_json_describe_same_graph(extended_system):
    document = document_for_system(extended_system, causal_ordering(extended_system))
    nodes, arcs = parse_dot(to_dot(document))
    assert set(nodes) == {node["name"] for node in document["nodes"]}
    assert arcs == {(a["tail"], a["head"], a["kind"]) for a in document["arcs"]}
    assert nodes["NS"] == "NS (0)"
    assert nodes["CS"] == "CS"  # unresolved nodes carry no order suffix


def test_json_is_deterministic(session_full_system):
    ordering = causal_ordering(session_full_system)
    a = to_json(document_for_system(session_full_system, ordering))
    b = to_json(document_for_system(session_full_system, causal_ordering(session_full_system)))
    assert a == b
    json.loads(a)  # well-formed


@given(st.builds(random_non_over_constrained, st.randoms(use_true_random=False), st.just(8)))
def test_dot_json_consistency_random(system):
    document = document_for_system(system, causal_ordering(system))
    nodes, arcs = parse_dot(to_dot(document))
    assert set(nodes) == {node["name"] for node in document["nodes"]}
    assert arcs == {(a["tail"], a["head"], a["kind"]) for a in document["arcs"]}
