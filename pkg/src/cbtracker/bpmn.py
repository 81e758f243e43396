"""BPMN 2.0 collaboration-diagram subset: in-memory model, XML parse/serialize.

Supported elements: definitions, collaboration, participant, messageFlow,
process, task, startEvent, endEvent, sequenceFlow, extensionElements, and
the ``cbt:`` extension vocabulary (annotation/kpi/current/target). Anything
else is a parse error, not silently ignored. Unknown attributes are
tolerated. The exact canonical layout is documented in docs/bpmn-subset.md
and frozen by the golden fixtures.

Serialization is a pure function of the model: no timestamps, no random
ids, byte-identical output for equal models.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator

from .annotation import AnnotationType, CbAnnotation
from .bmr import Role
from .errors import CbtError
from .formula import FormulaSyntaxError, format_formula, parse_formula
from .validation import Finding, ValidationReport, error

BPMN_NS = "http://www.omg.org/spec/BPMN/20100524/MODEL"
CBT_NS = "urn:cb-tracker:1"
TARGET_NS = "urn:cb-tracker:models"


class BpmnError(CbtError):
    code = "bpmn_error"


class BpmnSyntaxError(BpmnError):
    code = "bpmn_syntax"


class UnsupportedElementError(BpmnError):
    code = "bpmn_unsupported_element"


class DanglingReferenceError(BpmnError):
    code = "bpmn_dangling_reference"


class BpmnModelError(BpmnError):
    code = "bpmn_model"


class NodeKind(str, Enum):
    TASK = "task"
    START_EVENT = "startEvent"
    END_EVENT = "endEvent"


@dataclass(frozen=True)
class FlowNode:
    id: str
    kind: NodeKind
    name: str = ""
    display_id: str | None = None
    annotation: CbAnnotation | None = None


@dataclass(frozen=True)
class SequenceFlow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class MessageFlow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Pool:
    id: str
    name: str
    nodes: tuple[FlowNode, ...] = ()
    sequence_flows: tuple[SequenceFlow, ...] = ()
    role: Role | None = None

    @property
    def tasks(self) -> tuple[FlowNode, ...]:
        return tuple(n for n in self.nodes if n.kind is NodeKind.TASK)

    def node_by_id(self, node_id: str) -> FlowNode | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def task_by_name(self, name: str) -> FlowNode | None:
        for node in self.tasks:
            if node.name == name:
                return node
        return None


@dataclass(frozen=True)
class CollaborationModel:
    id: str
    pools: tuple[Pool, ...] = ()
    message_flows: tuple[MessageFlow, ...] = ()

    def pool_by_name(self, name: str) -> Pool | None:
        for pool in self.pools:
            if pool.name == name:
                return pool
        return None

    def iter_tasks(self) -> Iterator[tuple[Pool, FlowNode]]:
        for pool in self.pools:
            for node in pool.tasks:
                yield pool, node

    def task_by_display_id(self, display_id: str) -> tuple[Pool, FlowNode] | None:
        for pool, node in self.iter_tasks():
            if node.display_id == display_id:
                return pool, node
        return None

    def replace_task(self, pool_id: str, node: FlowNode) -> "CollaborationModel":
        """Return a copy with one task swapped (matched by node id)."""
        pools = tuple(
            replace(
                pool,
                nodes=tuple(node if n.id == node.id else n for n in pool.nodes),
            )
            if pool.id == pool_id
            else pool
            for pool in self.pools
        )
        return replace(self, pools=pools)


# ---------------------------------------------------------------------------
# Parsing

_B = "{%s}" % BPMN_NS
_C = "{%s}" % CBT_NS


def _attr(element: ET.Element, name: str, path: str, required: bool = True) -> str:
    value = element.get(name)
    if value is None:
        if required:
            raise BpmnModelError(f"missing attribute {name!r}", location=path)
        return ""
    return value


def _parse_annotation(element: ET.Element, path: str) -> tuple[CbAnnotation, str | None]:
    type_text = _attr(element, "type", path)
    try:
        kind = AnnotationType(type_text)
    except ValueError:
        raise BpmnModelError(f"unknown annotation type {type_text!r}", location=path) from None
    kpi = ""
    current = target = None
    for child in element:
        if child.tag != _C + "kpi":
            raise UnsupportedElementError(f"unsupported element {child.tag}", location=path)
        if kpi:
            raise BpmnModelError("multiple kpi elements", location=path)
        kpi = _attr(child, "name", path)
        for value_el in child:
            which = {_C + "current": "current", _C + "target": "target"}.get(value_el.tag)
            if which is None:
                raise UnsupportedElementError(
                    f"unsupported element {value_el.tag}", location=path
                )
            try:
                expr = parse_formula(value_el.text or "")
            except FormulaSyntaxError as exc:
                raise BpmnModelError(
                    f"invalid {which} formula: {exc.message}", location=path
                ) from exc
            if which == "current":
                current = expr
            else:
                target = expr
    annotation = CbAnnotation(
        actor=_attr(element, "actor", path),
        type=kind,
        goal=element.get("goal", ""),
        kpi=kpi,
        current=current,
        target=target,
    )
    return annotation, element.get("displayId")


def _parse_task(element: ET.Element, path: str) -> FlowNode:
    annotation = None
    display_id = None
    for child in element:
        if child.tag != _B + "extensionElements":
            raise UnsupportedElementError(f"unsupported element {child.tag}", location=path)
        for ext in child:
            if ext.tag != _C + "annotation":
                raise UnsupportedElementError(f"unsupported element {ext.tag}", location=path)
            if annotation is not None:
                raise BpmnModelError("multiple annotations on one task", location=path)
            annotation, display_id = _parse_annotation(ext, path)
    return FlowNode(
        id=_attr(element, "id", path),
        kind=NodeKind.TASK,
        name=element.get("name", ""),
        display_id=display_id,
        annotation=annotation,
    )


def _parse_event(element: ET.Element, kind: NodeKind, path: str) -> FlowNode:
    for child in element:
        raise UnsupportedElementError(f"unsupported element {child.tag}", location=path)
    return FlowNode(
        id=_attr(element, "id", path), kind=kind, name=element.get("name", "")
    )


def _parse_process(element: ET.Element, path: str) -> tuple[tuple[FlowNode, ...], tuple[SequenceFlow, ...]]:
    nodes: list[FlowNode] = []
    flows: list[SequenceFlow] = []
    for i, child in enumerate(element):
        child_path = f"{path}/*[{i}]"
        if child.tag == _B + "task":
            nodes.append(_parse_task(child, child_path))
        elif child.tag == _B + "startEvent":
            nodes.append(_parse_event(child, NodeKind.START_EVENT, child_path))
        elif child.tag == _B + "endEvent":
            nodes.append(_parse_event(child, NodeKind.END_EVENT, child_path))
        elif child.tag == _B + "sequenceFlow":
            flows.append(
                SequenceFlow(
                    id=_attr(child, "id", child_path),
                    source=_attr(child, "sourceRef", child_path),
                    target=_attr(child, "targetRef", child_path),
                )
            )
        else:
            raise UnsupportedElementError(f"unsupported element {child.tag}", location=child_path)
    return tuple(nodes), tuple(flows)


def parse_bpmn(xml: str) -> CollaborationModel:
    """Decode a document of the supported subset into a collaboration model."""
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        line, column = exc.position
        raise BpmnSyntaxError(exc.msg.split(":")[0], location=f"line {line}, column {column}") from exc
    if root.tag != _B + "definitions":
        raise UnsupportedElementError(f"unsupported root element {root.tag}", location="/")

    collaboration = None
    processes: dict[str, ET.Element] = {}
    for i, child in enumerate(root):
        path = f"definitions/*[{i}]"
        if child.tag == _B + "collaboration":
            if collaboration is not None:
                raise BpmnModelError("multiple collaboration elements", location=path)
            collaboration = child
        elif child.tag == _B + "process":
            processes[_attr(child, "id", path)] = child
        else:
            raise UnsupportedElementError(f"unsupported element {child.tag}", location=path)
    if collaboration is None:
        raise BpmnModelError("document has no collaboration element", location="definitions")

    pools: list[Pool] = []
    message_flows: list[MessageFlow] = []
    for i, child in enumerate(collaboration):
        path = f"collaboration/*[{i}]"
        if child.tag == _B + "participant":
            process_ref = _attr(child, "processRef", path)
            process = processes.pop(process_ref, None)
            if process is None:
                raise DanglingReferenceError(
                    f"participant references unknown process {process_ref!r}", location=path
                )
            role_text = child.get(_C + "role")
            try:
                role = Role(role_text) if role_text is not None else None
            except ValueError:
                raise BpmnModelError(f"unknown role {role_text!r}", location=path) from None
            nodes, flows = _parse_process(process, f"process[{process_ref}]")
            pools.append(
                Pool(
                    id=_attr(child, "id", path),
                    name=child.get("name", ""),
                    nodes=nodes,
                    sequence_flows=flows,
                    role=role,
                )
            )
        elif child.tag == _B + "messageFlow":
            message_flows.append(
                MessageFlow(
                    id=_attr(child, "id", path),
                    source=_attr(child, "sourceRef", path),
                    target=_attr(child, "targetRef", path),
                )
            )
        else:
            raise UnsupportedElementError(f"unsupported element {child.tag}", location=path)
    if processes:
        leftover = sorted(processes)[0]
        raise DanglingReferenceError(
            f"process {leftover!r} is not referenced by any participant",
            location=f"process[{leftover}]",
        )

    model = CollaborationModel(
        id=_attr(collaboration, "id", "collaboration"),
        pools=tuple(pools),
        message_flows=tuple(message_flows),
    )
    _check_references(model)
    return model


def _check_references(model: CollaborationModel) -> None:
    """Parse-time reference checks: dangling or cross-pool flows are errors."""
    node_pool: dict[str, Pool] = {}
    ids: set[str] = set()
    for pool in model.pools:
        if pool.id in ids:
            raise BpmnModelError(f"duplicate id {pool.id!r}", location=pool.id)
        ids.add(pool.id)
        for node in pool.nodes:
            if node.id in ids:
                raise BpmnModelError(f"duplicate id {node.id!r}", location=node.id)
            ids.add(node.id)
            node_pool[node.id] = pool
    for pool in model.pools:
        for flow in pool.sequence_flows:
            if flow.id in ids:
                raise BpmnModelError(f"duplicate id {flow.id!r}", location=flow.id)
            ids.add(flow.id)
            for ref in (flow.source, flow.target):
                if ref not in node_pool:
                    raise DanglingReferenceError(
                        f"sequence flow references unknown node {ref!r}", location=flow.id
                    )
                if node_pool[ref] is not pool:
                    raise BpmnModelError(
                        "sequence flow endpoints must share one pool", location=flow.id
                    )
    for flow in model.message_flows:
        if flow.id in ids:
            raise BpmnModelError(f"duplicate id {flow.id!r}", location=flow.id)
        ids.add(flow.id)
        for ref in (flow.source, flow.target):
            if ref not in node_pool:
                raise DanglingReferenceError(
                    f"message flow references unknown node {ref!r}", location=flow.id
                )
        if node_pool[flow.source] is node_pool[flow.target]:
            raise BpmnModelError(
                "message flow endpoints must lie in different pools", location=flow.id
            )


# ---------------------------------------------------------------------------
# Serialization

_ATTR_ESCAPES = [
    ("&", "&amp;"), ("<", "&lt;"), (">", "&gt;"), ('"', "&quot;"),
    ("\n", "&#10;"), ("\t", "&#9;"), ("\r", "&#13;"),
]


def _esc_attr(value: str) -> str:
    for raw, escaped in _ATTR_ESCAPES:
        value = value.replace(raw, escaped)
    return value


def _esc_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def process_id_for(pool: Pool) -> str:
    return f"{pool.id}_process"


def _annotation_lines(node: FlowNode, indent: str) -> list[str]:
    ann = node.annotation
    assert ann is not None
    attrs = f'actor="{_esc_attr(ann.actor)}" type="{ann.type.value}" goal="{_esc_attr(ann.goal)}"'
    if node.display_id is not None:
        attrs += f' displayId="{_esc_attr(node.display_id)}"'
    if not ann.kpi:
        return [f"{indent}<cbt:annotation {attrs}/>"]
    lines = [f"{indent}<cbt:annotation {attrs}>"]
    lines.append(f'{indent}  <cbt:kpi name="{_esc_attr(ann.kpi)}">')
    if ann.current is not None:
        lines.append(f"{indent}    <cbt:current>{_esc_text(format_formula(ann.current))}</cbt:current>")
    if ann.target is not None:
        lines.append(f"{indent}    <cbt:target>{_esc_text(format_formula(ann.target))}</cbt:target>")
    lines.append(f"{indent}  </cbt:kpi>")
    lines.append(f"{indent}</cbt:annotation>")
    return lines


def serialize_bpmn(model: CollaborationModel) -> str:
    """Emit canonical BPMN 2.0 XML; raises BpmnModelError if invariants fail."""
    report = validate_structure(model)
    if not report.ok:
        first = next(f for f in report.findings if f.severity == "error")
        raise BpmnModelError(first.message, location=first.path)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<definitions xmlns="{BPMN_NS}" xmlns:cbt="{CBT_NS}" '
        f'id="definitions_1" targetNamespace="{TARGET_NS}">',
        f'  <collaboration id="{_esc_attr(model.id)}">',
    ]
    for pool in model.pools:
        attrs = (
            f'id="{_esc_attr(pool.id)}" name="{_esc_attr(pool.name)}" '
            f'processRef="{_esc_attr(process_id_for(pool))}"'
        )
        if pool.role is not None:
            attrs += f' cbt:role="{pool.role.value}"'
        lines.append(f"    <participant {attrs}/>")
    for flow in model.message_flows:
        lines.append(
            f'    <messageFlow id="{_esc_attr(flow.id)}" '
            f'sourceRef="{_esc_attr(flow.source)}" targetRef="{_esc_attr(flow.target)}"/>'
        )
    lines.append("  </collaboration>")
    for pool in model.pools:
        lines.append(f'  <process id="{_esc_attr(process_id_for(pool))}">')
        for node in pool.nodes:
            if node.kind is NodeKind.TASK:
                attrs = f'id="{_esc_attr(node.id)}" name="{_esc_attr(node.name)}"'
                if node.annotation is None:
                    lines.append(f"    <task {attrs}/>")
                else:
                    lines.append(f"    <task {attrs}>")
                    lines.append("      <extensionElements>")
                    lines.extend(_annotation_lines(node, "        "))
                    lines.append("      </extensionElements>")
                    lines.append("    </task>")
            else:
                attrs = f'id="{_esc_attr(node.id)}"'
                if node.name:
                    attrs += f' name="{_esc_attr(node.name)}"'
                lines.append(f"    <{node.kind.value} {attrs}/>")
        for flow in pool.sequence_flows:
            lines.append(
                f'    <sequenceFlow id="{_esc_attr(flow.id)}" '
                f'sourceRef="{_esc_attr(flow.source)}" targetRef="{_esc_attr(flow.target)}"/>'
            )
        lines.append("  </process>")
    lines.append("</definitions>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structural validation

def validate_structure(model: CollaborationModel) -> ValidationReport:
    """Check collaboration invariants; findings are data, not failures."""
    findings: list[Finding] = []
    if not model.pools:
        findings.append(error("pools", "collaboration needs at least one pool"))

    ids: set[str] = {model.id}
    display_ids: set[str] = set()
    node_pool: dict[str, tuple[int, Pool, FlowNode]] = {}

    def claim(element_id: str, path: str) -> None:
        if element_id in ids:
            findings.append(error(path, f"duplicate id {element_id!r}"))
        ids.add(element_id)

    for p, pool in enumerate(model.pools):
        pool_path = f"pools[{p}]"
        claim(pool.id, pool_path)
        for n, node in enumerate(pool.nodes):
            node_path = f"{pool_path}.nodes[{n}]"
            claim(node.id, node_path)
            node_pool[node.id] = (p, pool, node)
            if node.display_id is not None:
                if node.display_id in display_ids:
                    findings.append(
                        error(node_path, f"duplicate displayId {node.display_id!r}")
                    )
                display_ids.add(node.display_id)
            if node.kind is not NodeKind.TASK:
                if node.annotation is not None:
                    findings.append(error(node_path, "events cannot carry annotations"))
                if node.display_id is not None:
                    findings.append(error(node_path, "events cannot carry display ids"))
            elif node.display_id is not None and node.annotation is None:
                findings.append(error(node_path, "displayId requires an annotation"))
            if node.annotation is not None:
                if node.annotation.actor != pool.name:
                    findings.append(
                        error(
                            node_path,
                            f"annotation actor {node.annotation.actor!r} does not match "
                            f"pool name {pool.name!r}",
                        )
                    )
                if not node.annotation.kpi and (
                    node.annotation.current is not None or node.annotation.target is not None
                ):
                    findings.append(error(node_path, "kpi name required when values are set"))

    for p, pool in enumerate(model.pools):
        for f, flow in enumerate(pool.sequence_flows):
            path = f"pools[{p}].sequenceFlows[{f}]"
            claim(flow.id, path)
            if flow.source == flow.target:
                findings.append(error(path, "flow endpoints must differ"))
            for ref in (flow.source, flow.target):
                entry = node_pool.get(ref)
                if entry is None:
                    findings.append(error(path, f"unknown node {ref!r}"))
                elif entry[0] != p:
                    findings.append(error(path, "sequence flow endpoints must share one pool"))

    for f, flow in enumerate(model.message_flows):
        path = f"messageFlows[{f}]"
        claim(flow.id, path)
        if flow.source == flow.target:
            findings.append(error(path, "flow endpoints must differ"))
        source = node_pool.get(flow.source)
        target = node_pool.get(flow.target)
        for ref, entry in ((flow.source, source), (flow.target, target)):
            if entry is None:
                findings.append(error(path, f"unknown node {ref!r}"))
            elif entry[2].kind is not NodeKind.TASK:
                findings.append(error(path, f"message flow endpoint {ref!r} is not a task"))
        if source is not None and target is not None and source[0] == target[0]:
            findings.append(error(path, "message flow endpoints must lie in different pools"))

    return ValidationReport(tuple(findings))
