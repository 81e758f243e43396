"""Deterministic transformation of a radar into a BPMN collaboration model.

The mechanical part is fixed: one pool per actor (users on top, then the
focal organization, then partners), and within each pool one task per cost,
co-creation activity, and benefit, grouped as cost(s), activity, benefit(s)
per activity. The judgment calls (reordering tasks, connecting tasks within
and across pools, placing start/end events) are never guessed: they come
from an explicit :class:`WiringHints` document, with mechanical defaults
when the hints are silent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import Any

from .annotation import AnnotationType, CbAnnotation
from .bmr import BusinessModelRadar, BmrInvariantError, Role, validate_bmr
from .bpmn import (
    CollaborationModel,
    FlowNode,
    MessageFlow,
    NodeKind,
    Pool,
    SequenceFlow,
)
from .errors import CbtError
from .validation import Finding, warning

_DISPLAY_ID_RE = re.compile(r"^\d+(\.\d+)*$")


class TransformError(CbtError):
    code = "transform_error"


class UnknownNameError(TransformError):
    code = "transform_unknown_name"


class OverrideCollisionError(TransformError):
    code = "transform_override_collision"


class HintsError(TransformError):
    code = "transform_hints"


@dataclass(frozen=True)
class SequenceEdge:
    pool: str
    source: str
    target: str


@dataclass(frozen=True)
class MessageEdge:
    source_pool: str
    source_task: str
    target_pool: str
    target_task: str


@dataclass(frozen=True)
class BoundaryHint:
    pool: str
    omit: bool = False
    start_before: str | None = None
    end_after: str | None = None


@dataclass(frozen=True)
class DisplayIdOverride:
    pool: str
    task: str
    id: str


@dataclass(frozen=True)
class WiringHints:
    task_order: dict[str, tuple[str, ...]] | None = None
    sequence_edges: tuple[SequenceEdge, ...] = ()
    message_edges: tuple[MessageEdge, ...] = ()
    boundary: tuple[BoundaryHint, ...] = ()
    display_ids: tuple[DisplayIdOverride, ...] = ()


EMPTY_HINTS = WiringHints()


def load_hints(document: str) -> WiringHints:
    """Parse a wiring-hints JSON document."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise HintsError(exc.msg, location=f"line {exc.lineno}, column {exc.colno}") from exc
    if not isinstance(obj, dict):
        raise HintsError("hints document must be an object", location="$")

    def _require(entry: Any, keys: tuple[str, ...], path: str) -> None:
        if not isinstance(entry, dict):
            raise HintsError("expected an object", location=path)
        for key in keys:
            if key not in entry:
                raise HintsError(f"missing {key!r}", location=path)

    task_order = None
    if "taskOrder" in obj:
        if not isinstance(obj["taskOrder"], dict):
            raise HintsError("taskOrder must map pool name to task names", location="taskOrder")
        task_order = {
            pool: tuple(names) for pool, names in obj["taskOrder"].items()
        }
    sequence_edges = []
    for i, entry in enumerate(obj.get("sequenceEdges", [])):
        _require(entry, ("pool", "source", "target"), f"sequenceEdges[{i}]")
        sequence_edges.append(SequenceEdge(entry["pool"], entry["source"], entry["target"]))
    message_edges = []
    for i, entry in enumerate(obj.get("messageEdges", [])):
        _require(
            entry,
            ("sourcePool", "sourceTask", "targetPool", "targetTask"),
            f"messageEdges[{i}]",
        )
        message_edges.append(
            MessageEdge(
                entry["sourcePool"], entry["sourceTask"], entry["targetPool"], entry["targetTask"]
            )
        )
    boundary = []
    for i, entry in enumerate(obj.get("boundary", [])):
        _require(entry, ("pool",), f"boundary[{i}]")
        boundary.append(
            BoundaryHint(
                pool=entry["pool"],
                omit=bool(entry.get("omit", False)),
                start_before=entry.get("startBefore"),
                end_after=entry.get("endAfter"),
            )
        )
    display_ids = []
    for i, entry in enumerate(obj.get("displayIds", [])):
        _require(entry, ("pool", "task", "id"), f"displayIds[{i}]")
        display_ids.append(DisplayIdOverride(entry["pool"], entry["task"], entry["id"]))
    return WiringHints(
        task_order=task_order,
        sequence_edges=tuple(sequence_edges),
        message_edges=tuple(message_edges),
        boundary=tuple(boundary),
        display_ids=tuple(display_ids),
    )


def _pool_order(radar: BusinessModelRadar):
    users = [a for a in radar.actors if a.role is Role.USER]
    focal = [a for a in radar.actors if a.role is Role.FOCAL]
    partners = [a for a in radar.actors if a.role is Role.PARTNER]
    return users + focal + partners


def build_pools(radar: BusinessModelRadar) -> CollaborationModel:
    """Lay out pools and tasks mechanically; no flows, no display ids yet.

    Pool order: user actors in radar order, then the focal organization,
    then partners in radar order. Within a pool: participation costs, then
    for each activity its costs, the activity itself, and its benefits,
    then participation benefits. Every task gets a default annotation with
    the pool name as actor and its element kind as type.
    """
    report = validate_bmr(radar)
    if not report.ok:
        raise BmrInvariantError(report)

    pools = []
    for p, actor in enumerate(_pool_order(radar), start=1):
        entries: list[tuple[str, AnnotationType]] = []
        entries.extend((label, AnnotationType.COST) for label in actor.actor_costs)
        for vp in actor.value_propositions:
            for activity in vp.activities:
                entries.extend((label, AnnotationType.COST) for label in activity.costs)
                entries.append((activity.name, AnnotationType.ACTIVITY))
                entries.extend((label, AnnotationType.BENEFIT) for label in activity.benefits)
        entries.extend((label, AnnotationType.BENEFIT) for label in actor.actor_benefits)
        nodes = tuple(
            FlowNode(
                id=f"task_{p}_{t}",
                kind=NodeKind.TASK,
                name=name,
                annotation=CbAnnotation(actor=actor.name, type=kind),
            )
            for t, (name, kind) in enumerate(entries, start=1)
        )
        pools.append(Pool(id=f"pool_{p}", name=actor.name, nodes=nodes, role=actor.role))
    return CollaborationModel(id="collaboration_1", pools=tuple(pools))


def _resolve_task(model: CollaborationModel, pool_name: str, task_name: str, where: str) -> tuple[Pool, FlowNode]:
    pool = model.pool_by_name(pool_name)
    if pool is None:
        raise UnknownNameError(f"unknown pool {pool_name!r}", location=where)
    matches = [n for n in pool.tasks if n.name == task_name]
    if not matches:
        raise UnknownNameError(
            f"unknown task {task_name!r} in pool {pool_name!r}", location=where
        )
    if len(matches) > 1:
        raise TransformError(
            f"task name {task_name!r} is ambiguous in pool {pool_name!r}", location=where
        )
    return pool, matches[0]


def assign_display_ids(
    model: CollaborationModel, overrides: tuple[DisplayIdOverride, ...] = ()
) -> CollaborationModel:
    """Number tasks ``<poolOrdinal>.<taskOrdinal>`` in final within-pool order.

    Explicit overrides win; default numbering skips any id an override has
    reserved so the result stays unique. Two overrides mapping to the same
    id, or an override on a missing task, are errors.
    """
    by_task: dict[str, str] = {}
    reserved: dict[str, DisplayIdOverride] = {}
    for override in overrides:
        if not _DISPLAY_ID_RE.match(override.id):
            raise OverrideCollisionError(
                f"display id {override.id!r} is not a dotted number",
                location=f"{override.pool}/{override.task}",
            )
        _, node = _resolve_task(model, override.pool, override.task, "displayIds")
        if node.id in by_task:
            raise OverrideCollisionError(
                f"task {override.task!r} has two display id overrides",
                location=f"{override.pool}/{override.task}",
            )
        if override.id in reserved:
            raise OverrideCollisionError(
                f"display id {override.id!r} assigned to two tasks",
                location=f"{override.pool}/{override.task}",
            )
        by_task[node.id] = override.id
        reserved[override.id] = override

    pools = []
    for p, pool in enumerate(model.pools, start=1):
        ordinal = 1
        nodes = []
        for node in pool.nodes:
            if node.kind is not NodeKind.TASK:
                nodes.append(node)
                continue
            display_id = by_task.get(node.id)
            if display_id is None:
                while f"{p}.{ordinal}" in reserved:
                    ordinal += 1
                display_id = f"{p}.{ordinal}"
                ordinal += 1
            nodes.append(replace(node, display_id=display_id))
        pools.append(replace(pool, nodes=tuple(nodes)))
    return replace(model, pools=tuple(pools))


def apply_wiring(model: CollaborationModel, hints: WiringHints) -> CollaborationModel:
    """Reorder tasks and wire flows: hints where given, linear chains otherwise.

    A taskOrder entry must list every task of its pool exactly once. Pools
    without explicit sequence edges are chained consecutively in their
    (possibly reordered) task order; explicit edges replace the default
    chain for that pool. Message edges become message flows verbatim.
    """
    task_order = hints.task_order or {}
    for pool_name in task_order:
        if model.pool_by_name(pool_name) is None:
            raise UnknownNameError(f"unknown pool {pool_name!r}", location="taskOrder")

    explicit: dict[str, list[SequenceEdge]] = {}
    seen_edges: set[SequenceEdge] = set()
    for edge in hints.sequence_edges:
        if edge in seen_edges:
            raise HintsError(
                f"duplicate sequence edge {edge.source!r} -> {edge.target!r}",
                location=edge.pool,
            )
        seen_edges.add(edge)
        explicit.setdefault(edge.pool, []).append(edge)
    for pool_name in explicit:
        if model.pool_by_name(pool_name) is None:
            raise UnknownNameError(f"unknown pool {pool_name!r}", location="sequenceEdges")

    pools = []
    for p, pool in enumerate(model.pools, start=1):
        nodes = pool.nodes
        if pool.name in task_order:
            wanted = task_order[pool.name]
            if any(n.kind is not NodeKind.TASK for n in nodes):
                raise TransformError(
                    f"cannot reorder pool {pool.name!r}: it already has events",
                    location=pool.id,
                )
            remaining = list(nodes)
            ordered = []
            for name in wanted:
                match = next((n for n in remaining if n.name == name), None)
                if match is None:
                    raise UnknownNameError(
                        f"unknown task {name!r} in pool {pool.name!r}", location="taskOrder"
                    )
                remaining.remove(match)
                ordered.append(match)
            if remaining:
                missing = ", ".join(repr(n.name) for n in remaining)
                raise HintsError(
                    f"taskOrder for pool {pool.name!r} does not list: {missing}",
                    location="taskOrder",
                )
            nodes = tuple(ordered)

        flows: list[SequenceFlow] = []
        if pool.name in explicit:
            for k, edge in enumerate(explicit[pool.name], start=1):
                _, source = _resolve_task(model, edge.pool, edge.source, "sequenceEdges")
                _, target = _resolve_task(model, edge.pool, edge.target, "sequenceEdges")
                if source.id == target.id:
                    raise HintsError(
                        f"edge would connect task {edge.source!r} to itself",
                        location=edge.pool,
                    )
                flows.append(SequenceFlow(id=f"flow_{p}_{k}", source=source.id, target=target.id))
        else:
            tasks = [n for n in nodes if n.kind is NodeKind.TASK]
            for k in range(len(tasks) - 1):
                flows.append(
                    SequenceFlow(
                        id=f"flow_{p}_{k + 1}", source=tasks[k].id, target=tasks[k + 1].id
                    )
                )
        pools.append(replace(pool, nodes=nodes, sequence_flows=tuple(flows)))

    reordered = replace(model, pools=tuple(pools))

    message_flows: list[MessageFlow] = []
    seen_message: set[MessageEdge] = set()
    for j, edge in enumerate(hints.message_edges, start=1):
        if edge in seen_message:
            raise HintsError(
                f"duplicate message edge {edge.source_task!r} -> {edge.target_task!r}",
                location=edge.source_pool,
            )
        seen_message.add(edge)
        source_pool, source = _resolve_task(
            reordered, edge.source_pool, edge.source_task, "messageEdges"
        )
        target_pool, target = _resolve_task(
            reordered, edge.target_pool, edge.target_task, "messageEdges"
        )
        if source.id == target.id:
            raise HintsError(
                f"edge would connect task {edge.source_task!r} to itself",
                location=edge.source_pool,
            )
        if source_pool.id == target_pool.id:
            raise HintsError(
                "message edge endpoints must lie in different pools",
                location=edge.source_pool,
            )
        message_flows.append(MessageFlow(id=f"mflow_{j}", source=source.id, target=target.id))
    return replace(reordered, message_flows=tuple(message_flows))


def _chain_ends(pool: Pool) -> tuple[FlowNode, FlowNode] | None:
    """The unique head and tail of the pool's task graph, or None if ambiguous."""
    tasks = pool.tasks
    if not tasks:
        return None
    incoming = {n.id: 0 for n in tasks}
    outgoing = {n.id: 0 for n in tasks}
    for flow in pool.sequence_flows:
        if flow.source in outgoing:
            outgoing[flow.source] += 1
        if flow.target in incoming:
            incoming[flow.target] += 1
    heads = [n for n in tasks if incoming[n.id] == 0]
    tails = [n for n in tasks if outgoing[n.id] == 0]
    if len(heads) != 1 or len(tails) != 1:
        return None
    return heads[0], tails[0]


def add_boundary_events(
    model: CollaborationModel,
    hints: WiringHints = EMPTY_HINTS,
    *,
    strict: bool = True,
    warnings: list[Finding] | None = None,
) -> CollaborationModel:
    """Attach a start event before each chain head and an end event after each tail.

    By default every pool with at least one task and an unambiguous chain
    gets both events; a boundary hint can name the attachment tasks or opt
    the pool out. In strict mode a hinted task that is not actually at a
    chain end is an error.
    """
    by_pool = {hint.pool: hint for hint in hints.boundary}
    for pool_name in by_pool:
        if model.pool_by_name(pool_name) is None:
            raise UnknownNameError(f"unknown pool {pool_name!r}", location="boundary")

    def note(pool: Pool, message: str) -> None:
        if warnings is not None:
            warnings.append(warning(pool.id, message))

    pools = []
    for p, pool in enumerate(model.pools, start=1):
        hint = by_pool.get(pool.name)
        if hint is not None and hint.omit:
            pools.append(pool)
            continue
        if not pool.tasks:
            note(pool, f"pool {pool.name!r} has no tasks; no boundary events added")
            pools.append(pool)
            continue
        if any(n.kind is not NodeKind.TASK for n in pool.nodes):
            note(pool, f"pool {pool.name!r} already has events; skipped")
            pools.append(pool)
            continue
        ends = _chain_ends(pool)
        if hint is not None and (hint.start_before or hint.end_after):
            head = (
                _resolve_task(model, pool.name, hint.start_before, "boundary")[1]
                if hint.start_before
                else (ends[0] if ends else None)
            )
            tail = (
                _resolve_task(model, pool.name, hint.end_after, "boundary")[1]
                if hint.end_after
                else (ends[1] if ends else None)
            )
            if head is None or tail is None:
                raise HintsError(
                    f"pool {pool.name!r} has no unambiguous chain; name both ends",
                    location="boundary",
                )
            if strict and ends is not None and (head.id != ends[0].id or tail.id != ends[1].id):
                raise HintsError(
                    f"boundary hint for pool {pool.name!r} does not name the chain ends",
                    location="boundary",
                )
        else:
            if ends is None:
                note(pool, f"pool {pool.name!r} has no unambiguous chain; skipped")
                pools.append(pool)
                continue
            head, tail = ends
        start = FlowNode(id=f"start_{p}", kind=NodeKind.START_EVENT)
        end = FlowNode(id=f"end_{p}", kind=NodeKind.END_EVENT)
        pools.append(
            replace(
                pool,
                nodes=(start, *pool.nodes, end),
                sequence_flows=(
                    *pool.sequence_flows,
                    SequenceFlow(id=f"flow_{p}_start", source=start.id, target=head.id),
                    SequenceFlow(id=f"flow_{p}_end", source=tail.id, target=end.id),
                ),
            )
        )
    return replace(model, pools=tuple(pools))


def transform(
    radar: BusinessModelRadar,
    hints: WiringHints = EMPTY_HINTS,
    *,
    strict: bool = True,
    warnings: list[Finding] | None = None,
) -> CollaborationModel:
    """Full pipeline: pools, wiring, display ids, boundary events.

    Display ids are assigned after wiring so that default numbering follows
    the final within-pool task order. Deterministic: equal inputs always
    produce byte-equal serialized output.
    """
    model = build_pools(radar)
    model = apply_wiring(model, hints)
    model = assign_display_ids(model, hints.display_ids)
    return add_boundary_events(model, hints, strict=strict, warnings=warnings)
