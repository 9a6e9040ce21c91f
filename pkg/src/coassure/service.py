"""HTTP facade exposing one live model session.

One model per process. Mutations (evidence updates, machine events) are
funneled through a single lock and bump a revision counter; every
response echoes the revision it was computed at. Report bodies are cached
per revision, so repeated reads without an intervening mutation are
byte-identical.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .bbn import Network, STATES, build_network
from .catalog import Catalog, load_catalog
from .errors import (
    InconsistentEvidenceError,
    InferenceError,
    NotFoundError,
    TransitionError,
)
from .impact import generate_report, report_to_doc, what_if, whatif_to_doc
from .links import (
    CompileParams,
    LinkTable,
    compile_network_spec,
    grouping_report,
    load_link_table,
)
from .machine import EventKind, Machine
from .machine import trace_records as machine_trace_records

UNOBSERVED = "unobserved"
EVIDENCE_STATES = set(STATES) | {UNOBSERVED}


@dataclass
class Session:
    """One loaded model plus its live evidence and machine."""

    catalog: Catalog
    table: LinkTable
    params: CompileParams
    network: Network
    evidence: dict[str, str] = field(default_factory=dict)
    machine: Machine = None  # type: ignore[assignment]
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    _report_cache: dict[int, bytes] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.machine is None:
            self.machine = Machine(self.catalog)

    def bump(self) -> int:
        self.revision += 1
        self._report_cache.clear()
        return self.revision

    def report_bytes(self) -> bytes:
        cached = self._report_cache.get(self.revision)
        if cached is not None:
            return cached
        report = generate_report(self.network, self.evidence, self.machine, self.catalog)
        doc = report_to_doc(report)
        doc["revision"] = self.revision
        body = json.dumps(doc, sort_keys=True).encode("utf-8")
        self._report_cache[self.revision] = body
        return body


def build_session(catalog: Catalog, table: LinkTable, params: CompileParams) -> Session:
    network = build_network(compile_network_spec(catalog, table, params))
    return Session(catalog=catalog, table=table, params=params, network=network)


def load_session_from_dir(model_dir: str | Path) -> Session:
    """Load catalog.json + links.json from a model directory."""
    model_dir = Path(model_dir)
    catalog = load_catalog(json.loads((model_dir / "catalog.json").read_text("utf-8")))
    table, params = load_link_table(json.loads((model_dir / "links.json").read_text("utf-8")))
    return build_session(catalog, table, params)


class EvidenceBody(BaseModel):
    state: str


class EventBody(BaseModel):
    kind: str
    requirement_id: str


class WhatIfBody(BaseModel):
    overlay: dict[str, str]


def create_app(session: Session | None, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="coassure", version="0.1.0")

    def require_session() -> Session:
        if session is None:
            raise HTTPException(status_code=503, detail="no model loaded")
        return session

    @app.get("/api/model")
    def get_model() -> dict:
        s = require_session()
        with s.lock:
            groups = grouping_report(s.catalog, s.table)
            return {
                "revision": s.revision,
                "nodes": [n.id for n in s.network.nodes],
                "classes": [
                    {"id": c.class_id, "name": c.name} for c in s.catalog.classes
                ],
                "groups": {
                    entry.state.value: {
                        "safety": list(entry.safety_ids),
                        "security": list(entry.class_ids),
                    }
                    for entry in groups.groups
                },
                "safety_requirements": [
                    {"id": r.id, "title": r.title, "req_type": r.req_type.value}
                    for r in s.catalog.safety_requirements()
                ],
                "evidence": dict(sorted(s.evidence.items())),
            }

    @app.put("/api/evidence/{class_id}")
    def put_evidence(class_id: str, body: EvidenceBody) -> dict:
        s = require_session()
        if body.state not in EVIDENCE_STATES:
            raise HTTPException(
                status_code=422,
                detail=f"state must be one of {sorted(EVIDENCE_STATES)}, got {body.state!r}",
            )
        with s.lock:
            if class_id not in {c.class_id for c in s.catalog.classes} or class_id not in s.network:
                raise HTTPException(status_code=404, detail=f"unknown security class {class_id!r}")
            if body.state == UNOBSERVED:
                s.evidence.pop(class_id, None)
            else:
                s.evidence[class_id] = body.state
            revision = s.bump()
            return {"revision": revision, "evidence": dict(sorted(s.evidence.items()))}

    @app.get("/api/report")
    def get_report() -> Response:
        s = require_session()
        with s.lock:
            try:
                body = s.report_bytes()
            except InconsistentEvidenceError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except InferenceError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        return Response(content=body, media_type="application/json")

    @app.post("/api/event")
    def post_event(body: EventBody) -> dict:
        s = require_session()
        try:
            kind = EventKind(body.kind)
        except ValueError:
            raise HTTPException(
                status_code=422, detail="kind must be 'Violation' or 'Resolution'"
            ) from None
        with s.lock:
            try:
                state = s.machine.apply(kind, body.requirement_id)
            except NotFoundError as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            except TransitionError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            revision = s.bump()
            return {
                "revision": revision,
                "state": state.value,
                "outstanding": sorted(s.machine.outstanding),
            }

    @app.post("/api/whatif")
    def post_whatif(body: WhatIfBody) -> dict:
        s = require_session()
        for class_id, state in body.overlay.items():
            if state not in EVIDENCE_STATES:
                raise HTTPException(
                    status_code=422,
                    detail=f"state must be one of {sorted(EVIDENCE_STATES)}, got {state!r}",
                )
        with s.lock:
            known = {c.class_id for c in s.catalog.classes}
            for class_id in body.overlay:
                if class_id not in known or class_id not in s.network:
                    raise HTTPException(
                        status_code=404, detail=f"unknown security class {class_id!r}"
                    )
            alternative = dict(s.evidence)
            for class_id, state in body.overlay.items():
                if state == UNOBSERVED:
                    alternative.pop(class_id, None)
                else:
                    alternative[class_id] = state
            try:
                diff = what_if(s.network, s.evidence, alternative)
            except InferenceError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            doc = whatif_to_doc(diff)
            doc["revision"] = s.revision  # what-if never mutates
            return doc

    @app.get("/api/trace")
    def get_trace() -> dict:
        s = require_session()
        with s.lock:
            return {
                "revision": s.revision,
                "state": s.machine.state.value,
                "trace": machine_trace_records(s.machine),
            }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="dashboard")

    return app
