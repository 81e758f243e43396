"""HTTP JSON API exposing the pipeline to scripts and the web UI.

One in-memory project at a time: ``PUT /v1/model`` replaces the stored
collaboration model atomically, reads work on immutable snapshots, and
``POST /v1/whatif`` re-evaluates override scenarios without ever mutating
the stored model. Errors are JSON objects ``{code, message, location}``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import replace
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .annotation import AnnotationError, AnnotationType, CbAnnotation, parse_value
from .bmr import BusinessModelRadar, Role, serialize_bmr
from .bpmn import (
    CollaborationModel,
    FlowNode,
    MessageFlow,
    NodeKind,
    Pool,
    SequenceFlow,
    validate_structure,
)
from .errors import CbtError
from .formula import format_formula, parse_formula
from .kpi import CycleError, EvaluationResult, UnknownReferenceError, evaluate
from .report import EXPORT_FORMATS, export_report, format_value, full_report, report_to_json_obj


class ServiceError(CbtError):
    code = "service_error"


class ProjectState:
    """The single in-memory project; PUT swaps the model atomically."""

    def __init__(
        self,
        model: CollaborationModel | None = None,
        radar: BusinessModelRadar | None = None,
    ):
        self.model = model
        self.radar = radar
        self.lock = threading.Lock()


# ---------------------------------------------------------------------------
# Model <-> JSON projection

def _annotation_obj(annotation: CbAnnotation) -> dict:
    return {
        "actor": annotation.actor,
        "type": annotation.type.value,
        "goal": annotation.goal,
        "kpi": annotation.kpi,
        "current": format_formula(annotation.current) if annotation.current else None,
        "target": format_formula(annotation.target) if annotation.target else None,
    }


def model_to_projection(model: CollaborationModel) -> dict:
    return {
        "id": model.id,
        "pools": [
            {
                "id": pool.id,
                "name": pool.name,
                "role": pool.role.value if pool.role else None,
                "nodes": [
                    {
                        "id": node.id,
                        "kind": node.kind.value,
                        "name": node.name,
                        "displayId": node.display_id,
                        "annotation": _annotation_obj(node.annotation)
                        if node.annotation
                        else None,
                    }
                    for node in pool.nodes
                ],
                "sequenceFlows": [
                    {"id": f.id, "source": f.source, "target": f.target}
                    for f in pool.sequence_flows
                ],
            }
            for pool in model.pools
        ],
        "messageFlows": [
            {"id": f.id, "source": f.source, "target": f.target}
            for f in model.message_flows
        ],
    }


def _require(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise ServiceError(f"missing {key!r}", location=path)
    return obj[key]


def _annotation_from_obj(obj: Any, path: str) -> CbAnnotation:
    try:
        kind = AnnotationType(_require(obj, "type", path))
    except ValueError:
        raise ServiceError(f"unknown annotation type {obj.get('type')!r}", location=path) from None
    current = obj.get("current")
    target = obj.get("target")
    return CbAnnotation(
        actor=_require(obj, "actor", path),
        type=kind,
        goal=obj.get("goal", ""),
        kpi=obj.get("kpi", ""),
        current=parse_formula(current) if current else None,
        target=parse_formula(target) if target else None,
    )


def model_from_projection(obj: Any) -> CollaborationModel:
    pools = []
    for p, pool_obj in enumerate(_require(obj, "pools", "$")):
        path = f"pools[{p}]"
        role_text = pool_obj.get("role")
        try:
            role = Role(role_text) if role_text else None
        except ValueError:
            raise ServiceError(f"unknown role {role_text!r}", location=path) from None
        nodes = []
        for n, node_obj in enumerate(pool_obj.get("nodes", [])):
            node_path = f"{path}.nodes[{n}]"
            try:
                kind = NodeKind(_require(node_obj, "kind", node_path))
            except ValueError:
                raise ServiceError(
                    f"unknown node kind {node_obj.get('kind')!r}", location=node_path
                ) from None
            annotation_obj = node_obj.get("annotation")
            nodes.append(
                FlowNode(
                    id=_require(node_obj, "id", node_path),
                    kind=kind,
                    name=node_obj.get("name", ""),
                    display_id=node_obj.get("displayId"),
                    annotation=_annotation_from_obj(annotation_obj, node_path)
                    if annotation_obj
                    else None,
                )
            )
        flows = [
            SequenceFlow(
                id=_require(f, "id", f"{path}.sequenceFlows[{i}]"),
                source=_require(f, "source", f"{path}.sequenceFlows[{i}]"),
                target=_require(f, "target", f"{path}.sequenceFlows[{i}]"),
            )
            for i, f in enumerate(pool_obj.get("sequenceFlows", []))
        ]
        pools.append(
            Pool(
                id=_require(pool_obj, "id", path),
                name=pool_obj.get("name", ""),
                nodes=tuple(nodes),
                sequence_flows=tuple(flows),
                role=role,
            )
        )
    flows = [
        MessageFlow(
            id=_require(f, "id", f"messageFlows[{i}]"),
            source=_require(f, "source", f"messageFlows[{i}]"),
            target=_require(f, "target", f"messageFlows[{i}]"),
        )
        for i, f in enumerate(obj.get("messageFlows", []))
    ]
    model = CollaborationModel(
        id=_require(obj, "id", "$"), pools=tuple(pools), message_flows=tuple(flows)
    )
    report = validate_structure(model)
    if not report.ok:
        first = next(f for f in report.findings if f.severity == "error")
        raise ServiceError(first.message, location=first.path)
    return model


# ---------------------------------------------------------------------------
# Evaluation payloads

def _values_obj(result: EvaluationResult, model: CollaborationModel) -> list[dict]:
    rows = []
    for (task_id, kpi), values in result.values.items():
        found = model.task_by_display_id(task_id)
        kind = found[1].annotation.type if found and found[1].annotation else AnnotationType.ACTIVITY
        rows.append(
            {
                "task": task_id,
                "kpi": kpi,
                "current": format_value(values.current, kind),
                "target": format_value(values.target, kind),
            }
        )
    return rows


def evaluation_payload(model: CollaborationModel) -> dict:
    result = evaluate(model)
    report = full_report(result, model)
    payload = report_to_json_obj(report)
    payload["values"] = _values_obj(result, model)
    payload["diagnostics"] = list(result.diagnostics)
    return payload


def apply_overrides(model: CollaborationModel, overrides: Any) -> CollaborationModel:
    """Return a copy of the model with current/target overrides applied."""
    if not isinstance(overrides, list):
        raise ServiceError("overrides must be a list", location="overrides")
    for i, entry in enumerate(overrides):
        path = f"overrides[{i}]"
        task_id = _require(entry, "taskDisplayId", path)
        kpi_name = _require(entry, "kpiName", path)
        found = model.task_by_display_id(task_id)
        if found is None:
            raise AnnotationError(f"unknown task {task_id!r}", location=path)
        pool, node = found
        annotation = node.annotation
        if annotation is None or annotation.kpi != kpi_name:
            raise AnnotationError(
                f"task {task_id!r} has no KPI named {kpi_name!r}", location=path
            )
        if "current" not in entry and "target" not in entry:
            raise ServiceError("override needs current and/or target", location=path)
        if "current" in entry:
            annotation = replace(annotation, current=parse_value(entry["current"], path))
        if "target" in entry:
            annotation = replace(annotation, target=parse_value(entry["target"], path))
        model = model.replace_task(pool.id, replace(node, annotation=annotation))
    return model


# ---------------------------------------------------------------------------
# Application

def _error_response(exc: CbtError, status: int) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": exc.code, "message": exc.message, "location": exc.location},
    )


def _status_for(exc: CbtError) -> int:
    if isinstance(exc, CycleError):
        return 409
    if isinstance(exc, (AnnotationError, UnknownReferenceError)):
        return 404
    return 400


def create_app(state: ProjectState | None = None, ui_dir: str | None = None) -> FastAPI:
    state = state or ProjectState()
    app = FastAPI(title="cbtracker", docs_url=None, redoc_url=None)
    app.state.project = state

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": "malformed request body", "location": None},
        )

    @app.exception_handler(CbtError)
    async def _domain_error(request: Request, exc: CbtError):
        return _error_response(exc, _status_for(exc))

    def current_model() -> CollaborationModel:
        model = state.model
        if model is None:
            raise AnnotationError("no model loaded", location="/v1/model")
        return model

    @app.get("/v1/model")
    def get_model():
        return model_to_projection(current_model())

    @app.put("/v1/model")
    def put_model(body: dict):
        model = model_from_projection(body)
        with state.lock:
            state.model = model
        return model_to_projection(model)

    @app.get("/v1/radar")
    def get_radar():
        if state.radar is None:
            raise AnnotationError("no radar loaded", location="/v1/radar")
        return json.loads(serialize_bmr(state.radar))

    @app.post("/v1/evaluate")
    def post_evaluate():
        return evaluation_payload(current_model())

    @app.post("/v1/whatif")
    def post_whatif(body: dict):
        snapshot = current_model()
        overridden = apply_overrides(snapshot, body.get("overrides", []))
        return evaluation_payload(overridden)

    @app.get("/v1/report")
    def get_report(format: str = "json"):
        if format not in EXPORT_FORMATS:
            raise ServiceError(
                f"unknown format {format!r}, expected one of {', '.join(EXPORT_FORMATS)}",
                location="format",
            )
        model = current_model()
        report = full_report(evaluate(model), model)
        content = export_report(report, format)
        if format == "json":
            return Response(content=content, media_type="application/json")
        if format == "csv":
            return PlainTextResponse(content, media_type="text/csv")
        return PlainTextResponse(content)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
