"""Cost-Benefit Tracker: business model radar to annotated business process.

Pipeline: parse a Business Model Radar document, transform it into a BPMN
2.0 collaboration diagram, annotate tasks with KPI formulas, evaluate the
KPI dependency graph, and aggregate per-actor cost-benefit overviews.
"""

from .annotation import AnnotationType, CbAnnotation, load_annotations
from .bmr import (
    BusinessModelRadar,
    CoCreationActivity,
    CoCreationActor,
    Role,
    ValueProposition,
    parse_bmr,
    serialize_bmr,
    validate_bmr,
)
from .bpmn import (
    CollaborationModel,
    FlowNode,
    MessageFlow,
    NodeKind,
    Pool,
    SequenceFlow,
    parse_bpmn,
    serialize_bpmn,
    validate_structure,
)
from .errors import CbtError
from .formula import (
    BinOp,
    FormulaExpr,
    KpiRef,
    Literal,
    evaluate_formula,
    format_formula,
    parse_formula,
)
from .kpi import (
    CycleError,
    EvaluationResult,
    KpiValues,
    UnknownReferenceError,
    attach_annotation,
    apply_annotations,
    evaluate,
    resolve_dependencies,
)
from .report import (
    CostBenefitOverview,
    CostBenefitReport,
    actor_overview,
    export_report,
    full_report,
)
from .transform import (
    WiringHints,
    add_boundary_events,
    apply_wiring,
    assign_display_ids,
    build_pools,
    load_hints,
    transform,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationType",
    "BinOp",
    "BusinessModelRadar",
    "CbAnnotation",
    "CbtError",
    "CoCreationActivity",
    "CoCreationActor",
    "CollaborationModel",
    "CostBenefitOverview",
    "CostBenefitReport",
    "CycleError",
    "EvaluationResult",
    "FlowNode",
    "FormulaExpr",
    "KpiRef",
    "KpiValues",
    "Literal",
    "MessageFlow",
    "NodeKind",
    "Pool",
    "Role",
    "SequenceFlow",
    "UnknownReferenceError",
    "ValueProposition",
    "WiringHints",
    "actor_overview",
    "add_boundary_events",
    "apply_annotations",
    "apply_wiring",
    "assign_display_ids",
    "attach_annotation",
    "build_pools",
    "evaluate",
    "evaluate_formula",
    "export_report",
    "format_formula",
    "full_report",
    "load_annotations",
    "load_hints",
    "parse_bmr",
    "parse_bpmn",
    "parse_formula",
    "resolve_dependencies",
    "serialize_bmr",
    "serialize_bpmn",
    "transform",
    "validate_bmr",
    "validate_structure",
]
