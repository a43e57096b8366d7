#!/usr/bin/env python3
"""Replay the university budget modeling session step by step.

Starts from the under-constrained class-size model, designates teaching
load, imports the faculty-salary mechanism (watch the auto-rename),
merges the duplicated enrollment variables, completes the boundary, then
fixes class size at 15 — which over-constrains the model and walks
through the release dialog.  Prints the causal graph after every step.
"""

from pathlib import Path

from causal_loom.graphdoc import document_for_system, to_dot
from causal_loom.kb import kb_load
from causal_loom.workspace import (
    ActionStatus,
    ws_add_mechanism,
    ws_from_model,
    ws_merge_variables,
    ws_release_equation,
    ws_set_exogenous,
)

ROOT = Path(__file__).resolve().parent.parent


def show(title, ws):
    print(f"=== {title} ===")
    print(to_dot(document_for_system(ws.system, ws.ordering)))


def main() -> None:
    kb = kb_load((ROOT / "models" / "university_kb.json").read_bytes())
    ws = ws_from_model((ROOT / "models" / "extended_under.sem").read_text())
    show("start: under-constrained class-size model", ws)

    steps = [
        ("designate TL = 6", lambda w: ws_set_exogenous(w, "TL", 6)),
        ("import faculty-salary mechanism", lambda w: ws_add_mechanism(w, kb, "university/finance/f10")),
        ("merge NS0 into NS", lambda w: ws_merge_variables(w, "NS0", "NS")),
        ("merge NF0 into NF", lambda w: ws_merge_variables(w, "NF0", "NF")),
        ("designate TA = 1200", lambda w: ws_set_exogenous(w, "TA", 1200)),
        ("designate O = 0.48", lambda w: ws_set_exogenous(w, "O", 0.48)),
        ("designate OI = 30000000", lambda w: ws_set_exogenous(w, "OI", 30000000)),
    ]
    for title, step in steps:
        result = step(ws)
        assert result.status is ActionStatus.APPLIED, result.reason
        ws = result.workspace
        show(title, ws)

    result = ws_set_exogenous(ws, "CS", 15)
    assert result.status is ActionStatus.NEEDS_RELEASE
    print("=== fixing CS = 15 over-constrains the model ===")
    for candidate in result.candidates:
        marker = "releasable" if candidate.valid else "not releasable"
        print(f"  {candidate.equation_id}: {marker}")
    print()

    final = ws_release_equation(result.workspace, "f9")
    assert final.status is ActionStatus.APPLIED
    show("released f9: teaching load is now endogenous", final.workspace)


if __name__ == "__main__":
    main()
