"""Cost-benefit task annotations: the Actor/Type/Goal/KPI/Current/Target record.

Annotations live on tasks of the collaboration model and are persisted as
``cbt:`` extension elements in the BPMN XML. An annotations JSON document
assigns KPI records to tasks by display id:

    {"annotations": [
        {"task": "1.5", "actor": "Streamer", "type": "co-creation-activity",
         "goal": "Profitability", "kpi": "Streaming count",
         "current": "3210", "target": "20000"}
    ]}

``current``/``target`` accept a number or a formula string.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Any

from .errors import CbtError
from .formula import FormulaExpr, Literal, parse_formula


class AnnotationType(str, Enum):
    COST = "cost"
    BENEFIT = "benefit"
    ACTIVITY = "co-creation-activity"


class AnnotationError(CbtError):
    code = "annotation_error"


@dataclass(frozen=True)
class CbAnnotation:
    actor: str
    type: AnnotationType
    goal: str = ""
    kpi: str = ""
    current: FormulaExpr | None = None
    target: FormulaExpr | None = None


def parse_value(value: Any, path: str) -> FormulaExpr:
    """Turn a JSON number or formula string into an expression."""
    if isinstance(value, bool):
        raise AnnotationError("expected number or formula string", location=path)
    if isinstance(value, (int, float)):
        return Literal(Decimal(str(value)))
    if isinstance(value, str):
        return parse_formula(value)
    raise AnnotationError("expected number or formula string", location=path)


def _parse_entry(obj: Any, path: str) -> tuple[str, CbAnnotation]:
    if not isinstance(obj, dict):
        raise AnnotationError("annotation entry must be an object", location=path)
    for key in ("task", "actor", "type"):
        if key not in obj:
            raise AnnotationError(f"annotation entry is missing {key!r}", location=path)
    try:
        kind = AnnotationType(obj["type"])
    except ValueError:
        raise AnnotationError(
            f"unknown annotation type {obj['type']!r}", location=f"{path}.type"
        ) from None
    kpi = obj.get("kpi", "")
    current = obj.get("current")
    target = obj.get("target")
    if not kpi and (current is not None or target is not None):
        raise AnnotationError(
            "kpi name required when current or target is set", location=f"{path}.kpi"
        )
    annotation = CbAnnotation(
        actor=obj["actor"],
        type=kind,
        goal=obj.get("goal", ""),
        kpi=kpi,
        current=parse_value(current, f"{path}.current") if current is not None else None,
        target=parse_value(target, f"{path}.target") if target is not None else None,
    )
    return obj["task"], annotation


def load_annotations(document: str) -> tuple[tuple[str, CbAnnotation], ...]:
    """Parse an annotations JSON document into (displayId, annotation) pairs."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise AnnotationError(
            exc.msg, location=f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("annotations"), list):
        raise AnnotationError("document must be {\"annotations\": [...]}", location="$")
    return tuple(
        _parse_entry(entry, f"annotations[{i}]")
        for i, entry in enumerate(obj["annotations"])
    )
