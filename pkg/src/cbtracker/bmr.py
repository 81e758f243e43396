"""Service-Dominant Business Model Radar: types, parsing, validation, serialization.

The on-disk format is BMR-JSON (UTF-8), a versioned JSON document:

    {
      "bmrVersion": "1",
      "solution": "...",
      "actors": [
        {
          "name": "...",
          "role": "user" | "focal" | "partner",
          "valuePropositions": [
            {"name": "...",
             "activities": [{"name": "...", "costs": [...], "benefits": [...]}]}
          ],
          "actorCosts": [...],      # optional, participation-level
          "actorBenefits": [...]    # optional
        }
      ]
    }

All types are immutable value objects; operations are pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import CbtError
from .validation import Finding, ValidationReport, error


class Role(str, Enum):
    USER = "user"
    FOCAL = "focal"
    PARTNER = "partner"


class BmrError(CbtError):
    code = "bmr_error"


class BmrSyntaxError(BmrError):
    """Raised when the document is not well-formed JSON."""

    code = "bmr_syntax"


class BmrSchemaError(BmrError):
    """Raised when the JSON does not match the BMR-JSON schema."""

    code = "bmr_schema"


class BmrInvariantError(BmrError):
    """Raised when a structurally valid radar violates model invariants."""

    code = "bmr_invariant"

    def __init__(self, report: ValidationReport):
        first = report.findings[0]
        super().__init__(first.message, location=first.path)
        self.report = report


@dataclass(frozen=True)
class CoCreationActivity:
    name: str
    costs: tuple[str, ...] = ()
    benefits: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValueProposition:
    name: str
    activities: tuple[CoCreationActivity, ...] = ()


@dataclass(frozen=True)
class CoCreationActor:
    name: str
    role: Role
    value_propositions: tuple[ValueProposition, ...] = ()
    actor_costs: tuple[str, ...] = ()
    actor_benefits: tuple[str, ...] = ()


@dataclass(frozen=True)
class BusinessModelRadar:
    solution: str
    actors: tuple[CoCreationActor, ...] = ()


def _expect(value: Any, kind: type, path: str) -> Any:
    if not isinstance(value, kind):
        raise BmrSchemaError(
            f"expected {kind.__name__}, got {type(value).__name__}", location=path
        )
    return value


def _str_list(value: Any, path: str) -> tuple[str, ...]:
    _expect(value, list, path)
    return tuple(_expect(item, str, f"{path}[{i}]") for i, item in enumerate(value))


def _parse_activity(obj: Any, path: str) -> CoCreationActivity:
    _expect(obj, dict, path)
    if "name" not in obj:
        raise BmrSchemaError("activity is missing 'name'", location=path)
    return CoCreationActivity(
        name=_expect(obj["name"], str, f"{path}.name"),
        costs=_str_list(obj.get("costs", []), f"{path}.costs"),
        benefits=_str_list(obj.get("benefits", []), f"{path}.benefits"),
    )


def _parse_vp(obj: Any, path: str) -> ValueProposition:
    _expect(obj, dict, path)
    if "name" not in obj:
        raise BmrSchemaError("value proposition is missing 'name'", location=path)
    activities = _expect(obj.get("activities", []), list, f"{path}.activities")
    return ValueProposition(
        name=_expect(obj["name"], str, f"{path}.name"),
        activities=tuple(
            _parse_activity(a, f"{path}.activities[{i}]") for i, a in enumerate(activities)
        ),
    )


def _parse_actor(obj: Any, path: str) -> CoCreationActor:
    _expect(obj, dict, path)
    if "name" not in obj:
        raise BmrSchemaError("actor is missing 'name'", location=path)
    if "role" not in obj:
        raise BmrSchemaError("actor is missing 'role'", location=path)
    role_text = _expect(obj["role"], str, f"{path}.role")
    try:
        role = Role(role_text)
    except ValueError:
        raise BmrSchemaError(
            f"unknown role {role_text!r}, expected one of user|focal|partner",
            location=f"{path}.role",
        ) from None
    vps = _expect(obj.get("valuePropositions", []), list, f"{path}.valuePropositions")
    return CoCreationActor(
        name=_expect(obj["name"], str, f"{path}.name"),
        role=role,
        value_propositions=tuple(
            _parse_vp(vp, f"{path}.valuePropositions[{i}]") for i, vp in enumerate(vps)
        ),
        actor_costs=_str_list(obj.get("actorCosts", []), f"{path}.actorCosts"),
        actor_benefits=_str_list(obj.get("actorBenefits", []), f"{path}.actorBenefits"),
    )


def parse_bmr(document: str, *, validate: bool = True) -> BusinessModelRadar:
    """Parse a BMR-JSON document into a radar, preserving element order.

    With ``validate=True`` (the default) the radar's invariants are checked
    and a :class:`BmrInvariantError` is raised on the first violation.
    """
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise BmrSyntaxError(exc.msg, location=f"line {exc.lineno}, column {exc.colno}") from exc
    _expect(obj, dict, "$")
    version = obj.get("bmrVersion")
    if version != "1":
        raise BmrSchemaError(
            f"unsupported bmrVersion {version!r}, expected \"1\"", location="bmrVersion"
        )
    if "solution" not in obj:
        raise BmrSchemaError("document is missing 'solution'", location="$")
    actors_obj = _expect(obj.get("actors", []), list, "actors")
    seen_names: set[str] = set()
    actors = []
    for i, actor_obj in enumerate(actors_obj):
        actor = _parse_actor(actor_obj, f"actors[{i}]")
        if actor.name in seen_names:
            raise BmrSchemaError(
                f"duplicate actor name {actor.name!r}", location=f"actors[{i}].name"
            )
        seen_names.add(actor.name)
        actors.append(actor)
    radar = BusinessModelRadar(
        solution=_expect(obj["solution"], str, "solution"),
        actors=tuple(actors),
    )
    if validate:
        report = validate_bmr(radar)
        if not report.ok:
            raise BmrInvariantError(report)
    return radar


def validate_bmr(radar: BusinessModelRadar) -> ValidationReport:
    """Check every radar invariant; an empty report means the radar is valid.

    Pure: the same radar always yields the same report.
    """
    findings: list[Finding] = []
    if not radar.solution:
        findings.append(error("solution", "solution must be non-empty"))

    focal = [a for a in radar.actors if a.role is Role.FOCAL]
    if len(focal) != 1:
        findings.append(
            error("actors", f"exactly one focal actor required, found {len(focal)}")
        )
    if not any(a.role is Role.USER for a in radar.actors):
        findings.append(error("actors", "at least one user actor required"))

    seen: set[str] = set()
    for i, actor in enumerate(radar.actors):
        path = f"actors[{i}]"
        if not actor.name:
            findings.append(error(f"{path}.name", "actor name must be non-empty"))
        if actor.name in seen:
            findings.append(error(f"{path}.name", f"duplicate actor name {actor.name!r}"))
        seen.add(actor.name)
        if not actor.value_propositions:
            findings.append(
                error(f"{path}.valuePropositions", "actor needs at least one value proposition")
            )
        cost_labels: set[str] = set()
        benefit_labels: set[str] = set()

        def check_labels(labels: tuple[str, ...], pool: set[str], label_path: str, kind: str):
            for k, label in enumerate(labels):
                if not label:
                    findings.append(error(f"{label_path}[{k}]", f"{kind} label must be non-empty"))
                if label in pool:
                    findings.append(
                        error(f"{label_path}[{k}]", f"duplicate {kind} label {label!r} within actor")
                    )
                pool.add(label)

        check_labels(actor.actor_costs, cost_labels, f"{path}.actorCosts", "cost")
        check_labels(actor.actor_benefits, benefit_labels, f"{path}.actorBenefits", "benefit")
        for j, vp in enumerate(actor.value_propositions):
            vp_path = f"{path}.valuePropositions[{j}]"
            if not vp.activities:
                findings.append(
                    error(f"{vp_path}.activities", "value proposition needs at least one activity")
                )
            for k, act in enumerate(vp.activities):
                act_path = f"{vp_path}.activities[{k}]"
                if not act.name:
                    findings.append(error(f"{act_path}.name", "activity name must be non-empty"))
                check_labels(act.costs, cost_labels, f"{act_path}.costs", "cost")
                check_labels(act.benefits, benefit_labels, f"{act_path}.benefits", "benefit")
    return ValidationReport(tuple(findings))


def _activity_obj(act: CoCreationActivity) -> dict:
    return {"name": act.name, "costs": list(act.costs), "benefits": list(act.benefits)}


def _actor_obj(actor: CoCreationActor) -> dict:
    obj: dict[str, Any] = {
        "name": actor.name,
        "role": actor.role.value,
        "valuePropositions": [
            {"name": vp.name, "activities": [_activity_obj(a) for a in vp.activities]}
            for vp in actor.value_propositions
        ],
    }
    if actor.actor_costs:
        obj["actorCosts"] = list(actor.actor_costs)
    if actor.actor_benefits:
        obj["actorBenefits"] = list(actor.actor_benefits)
    return obj


def serialize_bmr(radar: BusinessModelRadar) -> str:
    """Serialize to canonical BMR-JSON: stable key order, stable element order.

    Canonical means serializing the same radar twice yields identical bytes,
    and ``parse_bmr(serialize_bmr(r))`` is structurally equal to ``r``.
    """
    obj = {
        "bmrVersion": "1",
        "solution": radar.solution,
        "actors": [_actor_obj(a) for a in radar.actors],
    }
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
