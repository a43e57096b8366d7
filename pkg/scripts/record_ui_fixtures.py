#!/usr/bin/env python3
"""Record HTTP responses for the frontend's scripted session replay test.

Runs the full budget-planning session against an in-process service and
writes every request/response pair to frontend/test/fixtures/session.json
so the UI test suite can replay it with a stubbed fetch.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from causal_loom.kb import kb_load
from causal_loom.service import create_app

ROOT = Path(__file__).resolve().parent.parent

ACTIONS = [
    {"action": "set-exogenous", "variable": "TL", "value": 6},
    {"action": "add-mechanism", "path": "university/finance/f10"},
    {"action": "merge", "source": "NS0", "target": "NS"},
    {"action": "merge", "source": "NF0", "target": "NF"},
    {"action": "set-exogenous", "variable": "TA", "value": 1200},
    {"action": "set-exogenous", "variable": "O", "value": 0.48},
    {"action": "set-exogenous", "variable": "OI", "value": 30000000},
    {"action": "set-exogenous", "variable": "CS", "value": 15},
    {"action": "release", "equation": "f3"},   # invalid candidate: stays pending
    {"action": "release", "equation": "f9"},
]


def main() -> None:
    kb = kb_load((ROOT / "models" / "university_kb.json").read_bytes())
    client = TestClient(create_app(kb))
    model = (ROOT / "models" / "extended_under.sem").read_text()

    exchanges = []

    def record(method, path, body=None):
        response = client.request(method, path, json=body)
        exchanges.append(
            {
                "method": method,
                "path": path,
                "body": body,
                "status": response.status_code,
                "response": response.json(),
            }
        )
        return response.json()

    record("GET", "/kb/tree")
    created = record("POST", "/sessions", {"model": model})
    session = created["session"]
    # the recorded script uses a stable placeholder id
    for step in ACTIONS:
        record("POST", f"/sessions/{session}/actions", step)
    record("GET", f"/sessions/{session}/values")

    for exchange in exchanges:
        exchange["path"] = exchange["path"].replace(session, "SESSION")
        if isinstance(exchange["response"], dict) and exchange["response"].get("session"):
            exchange["response"]["session"] = "SESSION"

    out = ROOT / "frontend" / "test" / "fixtures" / "session.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(exchanges, indent=2) + "\n")
    print(f"wrote {out} ({len(exchanges)} exchanges)")


if __name__ == "__main__":
    main()
