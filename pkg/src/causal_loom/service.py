"""HTTP/JSON service exposing workspace and KB operations to the UI.

Sessions are in-memory, one workspace each; actions on a session are
serialized by a per-session lock.  The service is a thin adapter: every
request maps 1:1 to a workspace or KB call, and every action response
embeds the fresh graph document for the session.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import workspace as _ws
from .dsl import evaluate_forward
from .errors import CausalLoomError, EvaluationError, KbPathError
from .graphdoc import graph_document
from .kb import Folder, KnowledgeBase, kb_search_by_variable, format_kb_path
from .workspace import ActionResult, ActionStatus, Workspace


@dataclass
class Session:
    workspace: Workspace
    lock: threading.Lock


class CreateSessionRequest(BaseModel):
    model: str | None = None


class ActionRequest(BaseModel):
    action: str
    path: str | None = None
    source: str | None = None
    target: str | None = None
    variable: str | None = None
    value: float | None = None
    equation: str | None = None
    variables: list[str] | None = None
    dest: str | None = None


def _session_graph(ws: Workspace) -> dict:
    if ws.system is None:
        return graph_document(None)
    return graph_document(ws.ordering, ws.system.attributes)


def _candidates_json(result: ActionResult) -> list[dict] | None:
    if result.candidates is None:
        return None
    return [{"equation": c.equation_id, "valid": c.valid} for c in result.candidates]


def _folder_tree(folder: Folder) -> dict:
    return {
        "folders": {
            name: _folder_tree(folder.folders[name]) for name in sorted(folder.folders)
        },
        "mechanisms": [
            {
                "name": name,
                "participants": list(folder.mechanisms[name].participants),
                "kind": folder.mechanisms[name].equation.kind.value,
                "description": folder.mechanisms[name].description,
            }
            for name in sorted(folder.mechanisms)
        ],
    }


def create_app(kb: KnowledgeBase) -> FastAPI:
    app = FastAPI(title="causal-loom")
    app.state.kb = kb
    app.state.kb_lock = threading.Lock()
    app.state.sessions: dict[str, Session] = {}
    app.state.sessions_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        session = app.state.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    @app.post("/sessions")
    def create_session(request: CreateSessionRequest) -> dict:
        try:
            ws = _ws.ws_from_model(request.model) if request.model else _ws.ws_new()
        except CausalLoomError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex
        with app.state.sessions_lock:
            app.state.sessions[session_id] = Session(workspace=ws, lock=threading.Lock())
        return {"session": session_id, "graph": _session_graph(ws)}

    @app.get("/sessions/{session_id}/graph")
    def session_graph(session_id: str) -> dict:
        return _session_graph(get_session(session_id).workspace)

    @app.get("/sessions/{session_id}/values")
    def session_values(session_id: str) -> dict:
        ws = get_session(session_id).workspace
        if ws.system is None:
            return {"values": {}, "structural_only": []}
        try:
            values = evaluate_forward(ws.system, ws.ordering)
        except EvaluationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "values": values,
            "structural_only": sorted(set(ws.system.variables) - set(values)),
        }

    def require(request: ActionRequest, *fields: str) -> list:
        values = []
        for name in fields:
            value = getattr(request, name)
            if value is None:
                raise HTTPException(
                    status_code=422,
                    detail=f"action {request.action!r} requires field {name!r}",
                )
            values.append(value)
        return values

    def dispatch(session: Session, request: ActionRequest) -> ActionResult:
        ws = session.workspace
        action = request.action
        if ws.pending is not None and action not in ("release", "cancel"):
            raise HTTPException(
                status_code=409,
                detail="an over-constraining action is pending; release or cancel first",
            )
        if action == "add-mechanism":
            (path,) = require(request, "path")
            return _ws.ws_add_mechanism(ws, app.state.kb, path)
        if action == "merge":
            source, target = require(request, "source", "target")
            return _ws.ws_merge_variables(ws, source, target)
        if action == "set-exogenous":
            variable, value = require(request, "variable", "value")
            return _ws.ws_set_exogenous(ws, variable, value)
        if action == "release":
            (equation,) = require(request, "equation")
            return _ws.ws_release_equation(ws, equation)
        if action == "cancel":
            return _ws.ws_cancel_pending(ws)
        if action == "extract":
            variables, dest = require(request, "variables", "dest")
            with app.state.kb_lock:
                app.state.kb = _ws.ws_extract(ws, variables, app.state.kb, dest)
            return ActionResult(status=ActionStatus.APPLIED, workspace=ws)
        raise HTTPException(status_code=422, detail=f"unknown action {action!r}")

    @app.post("/sessions/{session_id}/actions")
    def session_action(session_id: str, request: ActionRequest):
        session = get_session(session_id)
        with session.lock:
            try:
                result = dispatch(session, request)
            except KbPathError as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            except CausalLoomError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            session.workspace = result.workspace
            body = {
                "status": result.status.value,
                "reason": result.reason,
                "candidates": _candidates_json(result),
                "warnings": list(result.warnings),
                "graph": _session_graph(result.workspace),
            }
            if result.status is ActionStatus.REJECTED:
                return JSONResponse(status_code=422, content=body)
            return body

    @app.get("/kb/tree")
    def kb_tree() -> dict:
        return _folder_tree(app.state.kb.root)

    @app.get("/kb/search")
    def kb_search(var: str) -> dict:
        paths = kb_search_by_variable(app.state.kb, var)
        return {"matches": [format_kb_path(p) for p in paths]}

    return app
