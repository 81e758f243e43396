"""KPI dependency resolution and evaluation over an annotated collaboration model.

Each annotated task carries one named KPI with a current and a target
expression. References pull values from other tasks by display id; the
current column is evaluated against referenced current values and the
target column against referenced target values, so each column forms a
coherent scenario. Reference edges from both columns share one dependency
graph, which must be acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal

from .annotation import AnnotationError, CbAnnotation
from .bpmn import CollaborationModel, FlowNode, Pool
from .errors import CbtError
from .formula import evaluate_formula, iter_refs

KpiKey = tuple[str, str]  # (task display id, kpi name)


class CycleError(CbtError):
    code = "kpi_cycle"

    def __init__(self, members: tuple[KpiKey, ...]):
        listed = " -> ".join(f"{task}:{kpi}" for task, kpi in members)
        super().__init__(f"KPI references form a cycle: {listed}")
        self.members = members


class UnknownReferenceError(CbtError):
    code = "kpi_unknown_reference"


class PlanError(CbtError):
    code = "kpi_plan"


@dataclass(frozen=True)
class KpiValues:
    current: Decimal | None = None
    target: Decimal | None = None


@dataclass(frozen=True)
class EvaluationResult:
    values: dict[KpiKey, KpiValues]
    diagnostics: tuple[str, ...] = ()


def annotated_kpis(model: CollaborationModel) -> list[tuple[Pool, FlowNode]]:
    """Tasks carrying a named KPI, in model order."""
    return [
        (pool, node)
        for pool, node in model.iter_tasks()
        if node.annotation is not None and node.annotation.kpi
    ]


def _key_for(node: FlowNode) -> KpiKey:
    if node.display_id is None:
        raise AnnotationError(
            f"task {node.name!r} carries a KPI but has no display id", location=node.id
        )
    assert node.annotation is not None
    return (node.display_id, node.annotation.kpi)


def _reference_edges(model: CollaborationModel) -> tuple[list[KpiKey], dict[KpiKey, list[KpiKey]]]:
    """Nodes in model order plus, per node, the keys its formulas reference."""
    entries = annotated_kpis(model)
    keys = [_key_for(node) for _, node in entries]
    known = set(keys)
    refs: dict[KpiKey, list[KpiKey]] = {}
    for (_, node), key in zip(entries, keys):
        annotation = node.annotation
        assert annotation is not None
        node_refs: list[KpiKey] = []
        for expr in (annotation.current, annotation.target):
            if expr is None:
                continue
            for ref in iter_refs(expr):
                ref_key = (ref.task_id, ref.kpi_name)
                if ref_key not in known:
                    if model.task_by_display_id(ref.task_id) is None:
                        detail = f"unknown task {ref.task_id!r}"
                    else:
                        detail = f"task {ref.task_id!r} has no KPI named {ref.kpi_name!r}"
                    raise UnknownReferenceError(
                        f"reference ({ref.task_id},{ref.kpi_name}) cannot be resolved: {detail}",
                        location=f"{key[0]}:{key[1]}",
                    )
                if ref_key not in node_refs:
                    node_refs.append(ref_key)
        refs[key] = node_refs
    return keys, refs


def _extract_cycle(start: KpiKey, refs: dict[KpiKey, list[KpiKey]], stuck: set[KpiKey]) -> tuple[KpiKey, ...]:
    """Walk unresolved references from ``start`` until a key repeats."""
    path: list[KpiKey] = []
    seen: set[KpiKey] = set()
    key = start
    while key not in seen:
        seen.add(key)
        path.append(key)
        key = next(ref for ref in refs[key] if ref in stuck)
    return tuple(path[path.index(key):])


def resolve_dependencies(model: CollaborationModel) -> tuple[KpiKey, ...]:
    """Topologically order all annotated KPIs so references come first.

    Raises :class:`CycleError` naming the cycle members in reference order,
    or :class:`UnknownReferenceError` naming a dangling reference.
    """
    keys, refs = _reference_edges(model)
    plan: list[KpiKey] = []
    placed: set[KpiKey] = set()
    pending = list(keys)
    while pending:
        progressed = False
        still_pending = []
        for key in pending:
            if all(ref in placed for ref in refs[key]):
                plan.append(key)
                placed.add(key)
                progressed = True
            else:
                still_pending.append(key)
        pending = still_pending
        if pending and not progressed:
            stuck = set(pending)
            raise CycleError(_extract_cycle(pending[0], refs, stuck))
    return tuple(plan)


def _check_plan(plan: tuple[KpiKey, ...], model: CollaborationModel) -> None:
    keys, refs = _reference_edges(model)
    if sorted(plan) != sorted(keys):
        raise PlanError("plan does not cover exactly the annotated KPIs")
    position = {key: i for i, key in enumerate(plan)}
    for key in plan:
        for ref in refs[key]:
            if position[ref] > position[key]:
                raise PlanError(f"plan evaluates {key} before its reference {ref}")


def evaluate(
    model: CollaborationModel, plan: tuple[KpiKey, ...] | None = None
) -> EvaluationResult:
    """Evaluate every annotated KPI; results are independent of plan order."""
    if plan is None:
        plan = resolve_dependencies(model)
    else:
        _check_plan(plan, model)

    lookup_node: dict[KpiKey, FlowNode] = {}
    for _, node in annotated_kpis(model):
        lookup_node[_key_for(node)] = node

    currents: dict[KpiKey, Decimal] = {}
    targets: dict[KpiKey, Decimal] = {}

    def make_lookup(env: dict[KpiKey, Decimal], column: str):
        def lookup(task_id: str, kpi_name: str) -> Decimal:
            value = env.get((task_id, kpi_name))
            if value is None:
                raise UnknownReferenceError(
                    f"({task_id},{kpi_name}) has no {column} value",
                    location=f"{task_id}:{kpi_name}",
                )
            return value

        return lookup

    diagnostics: list[str] = []
    values: dict[KpiKey, KpiValues] = {}
    for key in plan:
        annotation = lookup_node[key].annotation
        assert annotation is not None
        current = target = None
        if annotation.current is not None:
            current = evaluate_formula(annotation.current, make_lookup(currents, "current"))
            currents[key] = current
        if annotation.target is not None:
            target = evaluate_formula(annotation.target, make_lookup(targets, "target"))
            targets[key] = target
        if annotation.current is None and annotation.target is None:
            diagnostics.append(f"{key[0]}:{key[1]} has neither a current nor a target value")
        values[key] = KpiValues(current=current, target=target)

    ordered = {key: values[key] for _, node in annotated_kpis(model) for key in [_key_for(node)]}
    return EvaluationResult(values=ordered, diagnostics=tuple(diagnostics))


def attach_annotation(
    model: CollaborationModel, task_display_id: str, annotation: CbAnnotation
) -> CollaborationModel:
    """Return a copy of the model with the annotation stored on the task."""
    found = model.task_by_display_id(task_display_id)
    if found is None:
        raise AnnotationError(f"unknown task {task_display_id!r}", location=task_display_id)
    pool, node = found
    if annotation.actor != pool.name:
        raise AnnotationError(
            f"annotation actor {annotation.actor!r} does not match pool {pool.name!r}",
            location=task_display_id,
        )
    if not annotation.kpi and (annotation.current is not None or annotation.target is not None):
        raise AnnotationError(
            "kpi name required when current or target is set", location=task_display_id
        )
    return model.replace_task(pool.id, replace(node, annotation=annotation))


def apply_annotations(
    model: CollaborationModel, entries: tuple[tuple[str, CbAnnotation], ...]
) -> CollaborationModel:
    for task_display_id, annotation in entries:
        model = attach_annotation(model, task_display_id, annotation)
    return model
