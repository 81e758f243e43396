"""Per-actor cost-benefit overviews and report exports.

A KPI contributes to the money totals iff its task is annotated as a cost
or a benefit; co-creation-activity KPIs are counts and appear as line items
only. Totals use exact decimal arithmetic, and the net identity
``benefits - costs == net`` holds exactly for both columns. Exports render
money with two fractional digits and counts without forced rounding.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal

from .annotation import AnnotationType
from .bpmn import CollaborationModel
from .bmr import Role
from .errors import CbtError
from .kpi import EvaluationResult

EXPORT_FORMATS = ("json", "csv", "text-table")

_CENT = Decimal("0.01")


class ReportError(CbtError):
    code = "report_error"


@dataclass(frozen=True)
class LineItem:
    task_display_id: str
    task_name: str
    type: AnnotationType
    goal: str
    kpi: str
    current: Decimal | None
    target: Decimal | None


@dataclass(frozen=True)
class CostBenefitOverview:
    actor: str
    current_costs: Decimal
    current_benefits: Decimal
    current_net: Decimal
    target_costs: Decimal
    target_benefits: Decimal
    target_net: Decimal
    line_items: tuple[LineItem, ...]


@dataclass(frozen=True)
class CostBenefitReport:
    overviews: tuple[CostBenefitOverview, ...]
    focal_actor: str | None = None


def actor_overview(
    result: EvaluationResult, model: CollaborationModel, actor: str
) -> CostBenefitOverview:
    """Aggregate the actor's evaluated KPIs into totals and line items."""
    pool = model.pool_by_name(actor)
    if pool is None:
        raise ReportError(f"unknown actor {actor!r}", location=actor)

    items: list[LineItem] = []
    totals = {
        (AnnotationType.COST, "current"): Decimal(0),
        (AnnotationType.COST, "target"): Decimal(0),
        (AnnotationType.BENEFIT, "current"): Decimal(0),
        (AnnotationType.BENEFIT, "target"): Decimal(0),
    }
    for node in pool.tasks:
        annotation = node.annotation
        if annotation is None or not annotation.kpi:
            continue
        if node.display_id is None:
            raise ReportError(f"task {node.name!r} has no display id", location=node.id)
        key = (node.display_id, annotation.kpi)
        if key not in result.values:
            raise ReportError(
                f"model is not evaluated: no result for ({key[0]},{key[1]})",
                location=f"{key[0]}:{key[1]}",
            )
        values = result.values[key]
        items.append(
            LineItem(
                task_display_id=node.display_id,
                task_name=node.name,
                type=annotation.type,
                goal=annotation.goal,
                kpi=annotation.kpi,
                current=values.current,
                target=values.target,
            )
        )
        if annotation.type in (AnnotationType.COST, AnnotationType.BENEFIT):
            if values.current is not None:
                totals[(annotation.type, "current")] += values.current
            if values.target is not None:
                totals[(annotation.type, "target")] += values.target

    current_costs = totals[(AnnotationType.COST, "current")]
    current_benefits = totals[(AnnotationType.BENEFIT, "current")]
    target_costs = totals[(AnnotationType.COST, "target")]
    target_benefits = totals[(AnnotationType.BENEFIT, "target")]
    return CostBenefitOverview(
        actor=actor,
        current_costs=current_costs,
        current_benefits=current_benefits,
        current_net=current_benefits - current_costs,
        target_costs=target_costs,
        target_benefits=target_benefits,
        target_net=target_benefits - target_costs,
        line_items=tuple(items),
    )


def full_report(result: EvaluationResult, model: CollaborationModel) -> CostBenefitReport:
    """One overview per pool in pool order, plus the focal actor flag."""
    overviews = tuple(actor_overview(result, model, pool.name) for pool in model.pools)
    focal = next((pool.name for pool in model.pools if pool.role is Role.FOCAL), None)
    return CostBenefitReport(overviews=overviews, focal_actor=focal)


def format_money(value: Decimal | None) -> str | None:
    if value is None:
        return None
    return str(value.quantize(_CENT))


def format_value(value: Decimal | None, kind: AnnotationType) -> str | None:
    """Money (cost/benefit KPIs) with two digits; counts without rounding."""
    if value is None:
        return None
    if kind in (AnnotationType.COST, AnnotationType.BENEFIT):
        return format_money(value)
    return f"{value:f}"


def _overview_obj(overview: CostBenefitOverview) -> dict:
    goal_subtotals: dict[str, dict[str, str]] = {}
    for item in overview.line_items:
        if item.type is AnnotationType.ACTIVITY or not item.goal:
            continue
        bucket = goal_subtotals.setdefault(
            item.goal,
            {"currentCosts": "0.00", "currentBenefits": "0.00",
             "targetCosts": "0.00", "targetBenefits": "0.00"},
        )
        column = "Costs" if item.type is AnnotationType.COST else "Benefits"
        for side, value in (("current", item.current), ("target", item.target)):
            if value is not None:
                key = side + column
                bucket[key] = str((Decimal(bucket[key]) + value).quantize(_CENT))
    obj = {
        "actor": overview.actor,
        "currentCosts": format_money(overview.current_costs),
        "currentBenefits": format_money(overview.current_benefits),
        "currentNet": format_money(overview.current_net),
        "targetCosts": format_money(overview.target_costs),
        "targetBenefits": format_money(overview.target_benefits),
        "targetNet": format_money(overview.target_net),
        "lineItems": [
            {
                "taskDisplayId": item.task_display_id,
                "taskName": item.task_name,
                "type": item.type.value,
                "goal": item.goal,
                "kpi": item.kpi,
                "current": format_value(item.current, item.type),
                "target": format_value(item.target, item.type),
            }
            for item in overview.line_items
        ],
    }
    if goal_subtotals:
        # goal-level grouping: experimental, JSON export only
        obj["experimentalGoalSubtotals"] = goal_subtotals
    return obj


def report_to_json_obj(report: CostBenefitReport) -> dict:
    focal = next(
        (o for o in report.overviews if o.actor == report.focal_actor), None
    )
    return {
        "overviews": [_overview_obj(o) for o in report.overviews],
        "summary": {
            "focalActor": report.focal_actor,
            "focalCurrentNet": format_money(focal.current_net) if focal else None,
            "focalTargetNet": format_money(focal.target_net) if focal else None,
        },
    }


def _export_csv(report: CostBenefitReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["actor", "taskDisplayId", "taskName", "type", "goal", "kpi", "current", "target"]
    )
    for overview in report.overviews:
        for item in overview.line_items:
            writer.writerow(
                [
                    overview.actor,
                    item.task_display_id,
                    item.task_name,
                    item.type.value,
                    item.goal,
                    item.kpi,
                    format_value(item.current, item.type) or "",
                    format_value(item.target, item.type) or "",
                ]
            )
    return buffer.getvalue()


def _export_text_table(report: CostBenefitReport) -> str:
    lines = []
    for overview in report.overviews:
        flag = " (focal)" if overview.actor == report.focal_actor else ""
        lines.append(f"== {overview.actor}{flag}")
        if overview.line_items:
            rows = [("task", "name", "type", "kpi", "current", "target")]
            for item in overview.line_items:
                rows.append(
                    (
                        item.task_display_id,
                        item.task_name,
                        item.type.value,
                        item.kpi,
                        format_value(item.current, item.type) or "-",
                        format_value(item.target, item.type) or "-",
                    )
                )
            widths = [max(len(row[i]) for row in rows) for i in range(6)]
            for row in rows:
                lines.append("  " + "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        lines.append(
            f"  costs    current {format_money(overview.current_costs)}"
            f"  target {format_money(overview.target_costs)}"
        )
        lines.append(
            f"  benefits current {format_money(overview.current_benefits)}"
            f"  target {format_money(overview.target_benefits)}"
        )
        lines.append(
            f"  net      current {format_money(overview.current_net)}"
            f"  target {format_money(overview.target_net)}"
        )
        lines.append("")
    return "\n".join(lines)


def export_report(report: CostBenefitReport, format: str) -> str:
    """Render the report as deterministic bytes in the requested format."""
    if format == "json":
        return json.dumps(report_to_json_obj(report), indent=2, ensure_ascii=False) + "\n"
    if format == "csv":
        return _export_csv(report)
    if format == "text-table":
        return _export_text_table(report)
    raise ReportError(f"unknown format {format!r}, expected one of {', '.join(EXPORT_FORMATS)}")
