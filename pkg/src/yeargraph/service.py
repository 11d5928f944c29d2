"""HTTP/JSON API over the graph store, layout engine, and transition logic.

Every response is reproducible: identical request sequences against identical
datasets (with identical seeds) produce byte-identical JSON. Payload dicts are
built with a fixed key order, floats are rounded to six decimals, and session
ids are derived from the request parameters plus a creation ordinal rather
than from any random source.

Layout runs server-side; the browser client is a pure renderer. Sessions are
in-memory, single-writer (one lock per session), and expire after an idle
TTL; the graph itself is immutable after startup so reads take no lock.
"""

from __future__ import annotations

import hashlib
import os
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from yeargraph import dynamics
from yeargraph.errors import (
    NotFoundError,
    SessionExpiredError,
    ValidationError,
    YeargraphError,
)
from yeargraph.graph import PropertyGraph, SubgraphView
from yeargraph.layout import (
    LayoutParams,
    LayoutState,
    initial_layout,
    move_pinned,
    run_layout,
)
from yeargraph.layout.engine import seeded_position

DEFAULT_SESSION_TTL = 30 * 60.0  # seconds of idle time before a session expires
STEP_EPSILON = 0.01  # server-side convergence threshold for step polling


def _r6(x: float) -> float:
    return round(float(x), 6)


@dataclass
class LayoutSession:
    session_id: str
    dataset_id: str
    year: int
    primary_type: str
    secondary_type: str
    limit: int | None
    offset: int
    layout_kind: str
    seed: int
    view: SubgraphView
    state: LayoutState
    last_access: float
    lock: threading.Lock


class CreateSessionRequest(BaseModel):
    year: int
    x: str
    y: str
    limit: int | None = None
    offset: int | None = None
    layout: str = "circular"
    seed: int = 0


class StepRequest(BaseModel):
    iterations: int


class MoveRequest(BaseModel):
    node_id: str
    x: float
    y: float


class TransitionRequest(BaseModel):
    to_year: int
    mode: str = dynamics.MATCH_SIGNATURE


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _record_map(view: SubgraphView) -> dict[str, object]:
    records = {n.id: n for n, _ in view.primary_nodes}
    records.update((n.id, n) for n in view.secondary_nodes)
    records.update((n.id, n) for n in view.applicant_nodes)
    return records


def _one_node_payload(state: LayoutState, view_records, occurrence, nid: str) -> dict:
    record = view_records[nid]
    x, y = state.position_of(nid)
    node = {
        "id": nid,
        "kind": record.kind,
        "type": record.type,
        "label": record.label,
        "pinned": state.is_pinned(nid),
        "x": _r6(x),
        "y": _r6(y),
    }
    if nid in occurrence:
        node["occurrence"] = occurrence[nid]
    return node


def _node_payload(state: LayoutState, view: SubgraphView) -> list[dict]:
    records = _record_map(view)
    occurrence = {n.id: occ for n, occ in view.primary_nodes}
    return [_one_node_payload(state, records, occurrence, nid) for nid in state.ids]


def _edges_payload(view: SubgraphView) -> list[list[str]]:
    return [[e.applicant_id, e.attribute_id] for e in view.edges]


def create_app(
    datasets: dict[str, PropertyGraph],
    session_ttl: float = DEFAULT_SESSION_TTL,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="yeargraph", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.datasets = dict(datasets)
    app.state.sessions = {}
    app.state.session_ttl = session_ttl
    app.state.session_counter = 0
    app.state.registry_lock = threading.Lock()
    app.state.clock = time.monotonic

    # -- error mapping -------------------------------------------------------

    @app.exception_handler(ValidationError)
    async def _validation(_req: Request, exc: ValidationError):
        return _error_response(400, "validation", str(exc))

    @app.exception_handler(NotFoundError)
    async def _not_found(_req: Request, exc: NotFoundError):
        return _error_response(404, "not_found", str(exc))

    @app.exception_handler(SessionExpiredError)
    async def _expired(_req: Request, exc: SessionExpiredError):
        return _error_response(410, "session_expired", str(exc))

    @app.exception_handler(YeargraphError)
    async def _other(_req: Request, exc: YeargraphError):
        return _error_response(400, "error", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _request_validation(_req: Request, exc: RequestValidationError):
        return _error_response(400, "validation", str(exc))

    @app.exception_handler(StarletteHTTPException)
    async def _http(_req: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed"}.get(exc.status_code, "http_error")
        return _error_response(exc.status_code, code, str(exc.detail))

    # -- helpers -------------------------------------------------------------

    def graph_of(dataset_id: str) -> PropertyGraph:
        graph = app.state.datasets.get(dataset_id)
        if graph is None:
            raise NotFoundError(f"unknown dataset {dataset_id!r}")
        return graph

    def session_of(session_id: str) -> LayoutSession:
        with app.state.registry_lock:
            session = app.state.sessions.get(session_id)
            if session is None:
                raise NotFoundError(f"unknown session {session_id!r}")
            now = app.state.clock()
            if now - session.last_access > app.state.session_ttl:
                del app.state.sessions[session_id]
                raise SessionExpiredError(f"session {session_id!r} expired")
            session.last_access = now
            return session

    def new_session_id(req: CreateSessionRequest, dataset_id: str, ordinal: int) -> str:
        text = "|".join(
            str(p)
            for p in (
                dataset_id, req.year, req.x, req.y, req.limit,
                req.offset, req.layout, req.seed, ordinal,
            )
        )
        return "s" + hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()

    # -- routes ---------------------------------------------------------------

    @app.get("/api/datasets")
    def list_datasets():
        return [
            {
                "id": did,
                "nodes": graph.node_count,
                "edges": graph.edge_count,
            }
            for did, graph in sorted(app.state.datasets.items())
        ]

    @app.get("/api/datasets/{dataset_id}/attributes")
    def list_attributes(dataset_id: str):
        graph = graph_of(dataset_id)
        return [
            {"type": t, "value_count": c} for t, c in graph.list_attribute_types()
        ]

    @app.get("/api/datasets/{dataset_id}/years")
    def list_years(dataset_id: str):
        return graph_of(dataset_id).list_years()

    @app.post("/api/datasets/{dataset_id}/sessions")
    def create_session(dataset_id: str, req: CreateSessionRequest):
        graph = graph_of(dataset_id)
        view = graph.query_subgraph(req.year, req.x, req.y, req.limit, req.offset)
        params = LayoutParams(seed=req.seed)
        state = initial_layout(view, req.layout, params)
        with app.state.registry_lock:
            ordinal = app.state.session_counter
            app.state.session_counter += 1
            session = LayoutSession(
                session_id=new_session_id(req, dataset_id, ordinal),
                dataset_id=dataset_id,
                year=req.year,
                primary_type=req.x,
                secondary_type=req.y,
                limit=req.limit,
                offset=req.offset or 0,
                layout_kind=req.layout,
                seed=req.seed,
                view=view,
                state=state,
                last_access=app.state.clock(),
                lock=threading.Lock(),
            )
            app.state.sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "dataset": dataset_id,
            "year": session.year,
            "x": session.primary_type,
            "y": session.secondary_type,
            "nodes": _node_payload(state, view),
            "edges": _edges_payload(view),
        }

    @app.post("/api/sessions/{session_id}/step")
    def step_session(session_id: str, req: StepRequest):
        if req.iterations < 0:
            raise ValidationError("iterations must be >= 0")
        session = session_of(session_id)
        with session.lock:
            before = {nid: session.state.position_of(nid) for nid in session.state.ids}
            run = run_layout(
                session.state, session.view, max_iter=req.iterations, epsilon=STEP_EPSILON
            )
            changes = []
            for nid in session.state.ids:
                x, y = session.state.position_of(nid)
                if (x, y) != before[nid]:
                    changes.append({"id": nid, "x": _r6(x), "y": _r6(y)})
            converged = (
                run.converged
                if req.iterations
                else session.state.last_displacement < STEP_EPSILON
            )
            return {
                "changes": changes,
                "converged": converged,
                "iterations": run.iterations,
            }

    @app.post("/api/sessions/{session_id}/move")
    def move_node(session_id: str, req: MoveRequest):
        session = session_of(session_id)
        with session.lock:
            move_pinned(session.state, req.node_id, req.x, req.y)
        return {"ok": True}

    @app.post("/api/sessions/{session_id}/transition")
    def transition_session(session_id: str, req: TransitionRequest):
        session = session_of(session_id)
        graph = graph_of(session.dataset_id)
        with session.lock:
            to_view = graph.query_subgraph(
                req.to_year,
                session.primary_type,
                session.secondary_type,
                session.limit,
                session.offset,
            )
            diff = dynamics.transition(session.view, to_view, mode=req.mode)

            old_positions = session.state.positions()
            old_pinned = session.state.pinned
            params = LayoutParams(seed=session.seed)
            new_state = initial_layout(to_view, session.layout_kind, params)
            carried: dict[str, tuple[float, float]] = {}
            for vid in diff.retained_attributes:
                carried[vid] = old_positions[vid]
            for old, new in diff.kept_applicants:
                carried[new] = old_positions[old]
            for nid, (x, y) in carried.items():
                new_state.set_position(nid, x, y)
            added_ids = set(to_view.node_ids()) - set(old_positions)
            for nid in added_ids:
                x, y = seeded_position(session.seed, nid, params.radius / 2.0)
                new_state.set_position(nid, x, y)

            from_attr_ids = session.view.attribute_ids()
            removed_attributes = sorted(from_attr_ids - to_view.attribute_ids())

            session.view = to_view
            session.state = new_state
            session.year = req.to_year

            records = _record_map(to_view)
            occurrence = {n.id: occ for n, occ in to_view.primary_nodes}
            added_nodes = [
                _one_node_payload(new_state, records, occurrence, nid)
                for nid in new_state.ids
                if nid in added_ids
            ]

            return {
                "from_year": diff.from_year,
                "to_year": diff.to_year,
                "kept_applicants": [[old, new] for old, new in diff.kept_applicants],
                "removed_applicants": diff.removed_applicants,
                "added_applicants": diff.added_applicants,
                "removed_edges": [[e.applicant_id, e.attribute_id] for e in diff.removed_edges],
                "added_edges": [[e.applicant_id, e.attribute_id] for e in diff.added_edges],
                "retained_attributes": diff.retained_attributes,
                "removed_attributes": removed_attributes,
                "added_nodes": added_nodes,
                "edges": _edges_payload(to_view),
            }

    @app.get("/api/datasets/{dataset_id}/chart")
    def chart(dataset_id: str, x: str, limit: int | None = None, offset: int = 0):
        graph = graph_of(dataset_id)
        if x not in graph.attribute_types():
            raise NotFoundError(f"unknown attribute type {x!r}")
        if limit is not None and limit < 0:
            raise ValidationError("limit must be non-negative")
        if offset < 0:
            raise ValidationError("offset must be non-negative")
        years = graph.list_years()
        ranked = []
        for vid in graph.attributes_of_type(x):
            node = graph.node(vid)
            total = sum(graph.occurrence(vid, year) for year in years)
            ranked.append((-total, node.label, vid))
        ranked.sort()
        stop = offset + limit if limit is not None else None
        series = []
        for _total, label, vid in ranked[offset:stop]:
            s = dynamics.degree_series(vid, graph)
            series.append(
                {
                    "attribute_id": vid,
                    "label": label,
                    "points": [[year, degree] for year, degree in s.points],
                }
            )
        return series

    @app.get("/api/datasets/{dataset_id}/applicants/{applicant_id:path}")
    def applicant_detail(dataset_id: str, applicant_id: str):
        graph = graph_of(dataset_id)
        node, attrs = graph.get_applicant(applicant_id)
        return {
            "id": node.id,
            "label": node.label,
            "year": node.year,
            "props": dict(sorted(node.props.items())),
            "attributes": [{"type": a.type, "value": a.label} for a in attrs],
        }

    if static_dir is not None and os.path.isdir(static_dir):
        from starlette.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
