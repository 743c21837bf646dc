"""HTTP API exposing model sessions, judgment submission, results, and
sensitivity queries for the companion UI and other clients.

Sessions live in memory. Mutations on one session are serialized behind a
lock and bump a revision counter; reads snapshot (model, revision) under the
lock, so a response never mixes state from two revisions. Results are cached
as serialized bytes per revision, which makes repeated reads byte-identical.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .document import parse, serialize
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DocumentError,
    IncompleteModelError,
    JudgmentError,
    StructureError,
    TahpError,
)
from .model import DecisionModel, matrix_for, set_judgment
from .priority import CR_THRESHOLD, passes_gate, principal_eigenvector
from .sensitivity import SensitivityReport, sensitivity_report
from .synthesis import SynthesisResult, synthesize

SCHEMA_VERSION = "1"


class UnknownResourceError(TahpError):
    default_code = "service/not-found"


@dataclass
class Session:
    id: str
    model: DecisionModel
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    # cached (revision, bytes) per endpoint so unchanged reads are byte-stable
    results_cache: tuple[int, bytes] | None = None
    sensitivity_cache: dict[str, tuple[int, bytes]] = field(default_factory=dict)


class SessionStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, model: DecisionModel) -> Session:
        session = Session(id=uuid.uuid4().hex, model=model)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownResourceError(f"unknown session {session_id!r}", locus=session_id)
        return session

    def all(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())


def _error_body(err: TahpError) -> dict:
    return {"code": err.code, "message": str(err), "locus": err.locus}


_STATUS = (
    (UnknownResourceError, 404),
    (DocumentError, 400),
    (JudgmentError, 422),
    (IncompleteModelError, 409),
    (DegenerateInputError, 422),
    (ConvergenceError, 500),
    (StructureError, 422),
)


def _status_for(err: TahpError) -> int:
    for kind, status in _STATUS:
        if isinstance(err, kind):
            return status
    return 500


def _context_info(model: DecisionModel, ctx: str,
                  cr_threshold: float = CR_THRESHOLD) -> dict:
    members = model.context_members(ctx)
    missing = model.missing_pairs(ctx)
    info = {
        "id": ctx,
        "label": model.label(ctx),
        "members": [{"id": m, "label": model.label(m)} for m in members],
        "required": len(members) * (len(members) - 1) // 2,
        "missing": [[i, j] for i, j in missing],
        "complete": not missing,
    }
    if not missing:
        pv = principal_eigenvector(matrix_for(model, ctx))
        info["cr"] = pv.cr
        info["gate"] = passes_gate(pv, cr_threshold)
    return info


def _session_info(session: Session, model: DecisionModel, revision: int,
                  cr_threshold: float = CR_THRESHOLD) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "name": model.name,
        "theta": model.theta,
        "revision": revision,
        "complete": model.is_complete(),
        "criteria": [{"id": c, "label": model.label(c)} for c in model.criteria],
        "alternatives": [{"id": a, "label": model.label(a)} for a in model.alternatives],
        "contexts": [_context_info(model, c, cr_threshold) for c in model.contexts()],
    }


def _priority_payload(model: DecisionModel, pv, threshold: float) -> dict:
    members = model.context_members(pv.context)
    return {
        "context": pv.context,
        "weights": {m: w for m, w in zip(members, pv.weights)},
        "lambda_max": pv.lambda_max,
        "ci": pv.ci,
        "cr": pv.cr,
        "gate": passes_gate(pv, threshold),
    }


def _results_payload(model: DecisionModel, result: SynthesisResult,
                     revision: int, threshold: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "revision": revision,
        "theta": result.theta,
        "method": result.method.value,
        "overall_inconsistency": result.overall_inconsistency,
        "global_weights": [
            {"id": nid, "label": model.label(nid), "level": model.node(nid).level.value,
             "weight": w}
            for nid, w in result.global_weights.items()
        ],
        "alternative_scores": [
            {"id": aid, "label": model.label(aid), "score": s}
            for aid, s in result.alternative_scores.items()
        ],
        "ranking": list(result.ranking()),
        "contexts": [
            {"id": ctx, **{k: v for k, v in _priority_payload(model, pv, threshold).items()
                           if k != "context"}}
            for ctx, pv in result.per_context.items()
        ],
    }


def _sensitivity_payload(report: SensitivityReport, revision: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "revision": revision,
        "criterion": report.criterion,
        "base_weight": report.base_weight,
        "lines": [{"alternative": ln.alternative, "p": ln.p, "rest": ln.rest}
                  for ln in report.lines],
        "crossovers": [{"a": c.a, "b": c.b, "t": c.t, "degenerate": c.degenerate}
                       for c in report.crossovers],
        "rank_segments": [{"lo": s.lo, "hi": s.hi, "ranking": list(s.ranking)}
                          for s in report.rank_segments],
        "base_ranking": list(report.base_ranking),
        "ranking_at_zero": list(report.ranking_at_zero),
        "standing_ties": [list(t) for t in report.standing_ties],
        "reversal_at_zero": report.reversal_at_zero,
        "rank_one_changes": report.rank_one_changes,
    }


def _json_bytes(payload: dict) -> bytes:
    return json.dumps(payload, ensure_ascii=False).encode("utf-8")


def _missing_manifest(model: DecisionModel) -> dict:
    return {ctx: [[i, j] for i, j in model.missing_pairs(ctx)]
            for ctx in model.contexts() if model.missing_pairs(ctx)}


def create_app(snapshot_dir: str | None = None, ui_dir: str | None = None,
               cr_threshold: float = CR_THRESHOLD) -> FastAPI:
    """Build the service app; sessions can be preloaded via ``preload_session``."""
    app = FastAPI(title="tahp service", docs_url=None, redoc_url=None)
    store = SessionStore()
    app.state.store = store
    app.state.cr_threshold = cr_threshold
    app.state.snapshot_dir = snapshot_dir

    @app.exception_handler(TahpError)
    def handle_tahp_error(request: Request, err: TahpError) -> JSONResponse:
        body = _error_body(err)
        if isinstance(err, IncompleteModelError) and err.missing:
            body["missing"] = {c: [[i, j] for i, j in pairs]
                               for c, pairs in err.missing.items()}
        return JSONResponse(status_code=_status_for(err), content=body)

    @app.post("/sessions", status_code=201)
    def create_session(body: dict) -> dict:
        if not isinstance(body, dict):
            raise DocumentError("request body must be a model document object",
                                locus="(body)")
        model = parse(json.dumps(body))
        session = store.create(model)
        return {"id": session.id, "revision": session.revision, "name": model.name}

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        out = []
        for session in store.all():
            with session.lock:
                model, revision = session.model, session.revision
            out.append({"id": session.id, "name": model.name, "revision": revision,
                        "complete": model.is_complete()})
        return out

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            model, revision = session.model, session.revision
        return _session_info(session, model, revision, cr_threshold)

    @app.put("/sessions/{session_id}/judgments")
    def submit_judgment(session_id: str, body: dict) -> dict:
        session = store.get(session_id)
        for key in ("context", "i", "j", "value"):
            if key not in body or not isinstance(body[key], str):
                raise JudgmentError(f"missing or non-string field {key!r}",
                                    code="service/judgment-body", locus=key)
        with session.lock:
            model = set_judgment(session.model, body["context"], body["i"],
                                 body["j"], body["value"])
            session.model = model
            session.revision += 1
            revision = session.revision
        ctx = body["context"]
        payload: dict[str, Any] = {
            "revision": revision,
            "context": _context_info(model, ctx, cr_threshold),
        }
        if model.is_complete(ctx):
            pv = principal_eigenvector(matrix_for(model, ctx))
            payload["priority"] = _priority_payload(model, pv, cr_threshold)
        return payload

    @app.get("/sessions/{session_id}/results")
    def get_results(session_id: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            model, revision = session.model, session.revision
            cached = session.results_cache
        if cached is not None and cached[0] == revision:
            return Response(content=cached[1], media_type="application/json")
        if not model.is_complete():
            raise IncompleteModelError("session has unanswered judgments",
                                       missing=_missing_manifest(model))
        result = synthesize(model)
        body = _json_bytes(_results_payload(model, result, revision, cr_threshold))
        with session.lock:
            if session.revision == revision:
                session.results_cache = (revision, body)
        return Response(content=body, media_type="application/json")

    @app.get("/sessions/{session_id}/sensitivity/{criterion}")
    def get_sensitivity(session_id: str, criterion: str) -> Response:
        session = store.get(session_id)
        with session.lock:
            model, revision = session.model, session.revision
            cached = session.sensitivity_cache.get(criterion)
        if cached is not None and cached[0] == revision:
            return Response(content=cached[1], media_type="application/json")
        if criterion not in model.criteria:
            raise UnknownResourceError(f"unknown criterion {criterion!r}", locus=criterion)
        if not model.is_complete():
            raise IncompleteModelError("session has unanswered judgments",
                                       missing=_missing_manifest(model))
        result = synthesize(model)
        report = sensitivity_report(model, result, criterion)
        body = _json_bytes(_sensitivity_payload(report, revision))
        with session.lock:
            if session.revision == revision:
                session.sensitivity_cache[criterion] = (revision, body)
        return Response(content=body, media_type="application/json")

    @app.post("/sessions/{session_id}/save")
    def save_session(session_id: str, body: dict | None = None) -> dict:
        session = store.get(session_id)
        with session.lock:
            model, revision = session.model, session.revision
        text = serialize(model)
        path = None
        target = (body or {}).get("path") or snapshot_dir
        if target:
            target_path = Path(target)
            if target_path.is_dir() or not target_path.suffix:
                target_path.mkdir(parents=True, exist_ok=True)
                target_path = target_path / f"{session.id}.json"
            target_path.write_text(text, encoding="utf-8")
            path = str(target_path)
        return {"revision": revision, "path": path, "document": text}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def preload_session(app: FastAPI, model: DecisionModel) -> str:
    """Install a session directly (used by ``serve --model``)."""
    session = app.state.store.create(model)
    return session.id
