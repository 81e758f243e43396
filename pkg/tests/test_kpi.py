import itertools
from dataclasses import replace
from decimal import Decimal

import pytest

from cbtracker import (
    AnnotationType,
    CbAnnotation,
    CollaborationModel,
    CycleError,
    FlowNode,
    NodeKind,
    Pool,
    UnknownReferenceError,
    attach_annotation,
    evaluate,
    parse_formula,
    resolve_dependencies,
)
from cbtracker.annotation import AnnotationError
from cbtracker.formula import DivisionByZeroError, Literal, substitute
from cbtracker.kpi import PlanError, apply_annotations


def _model(*specs) -> CollaborationModel:
    """specs: (display_id, kpi, current_text, target_text) on one-pool tasks."""
    nodes = []
    for i, (display_id, kpi, current, target) in enumerate(specs, start=1):
        nodes.append(
            FlowNode(
                id=f"t{i}",
                kind=NodeKind.TASK,
                name=f"task {i}",
                display_id=display_id,
                annotation=CbAnnotation(
                    actor="A",
                    type=AnnotationType.COST,
                    kpi=kpi,
                    current=parse_formula(current) if current else None,
                    target=parse_formula(target) if target else None,
                ),
            )
        )
    return CollaborationModel(id="c", pools=(Pool(id="p1", name="A", nodes=tuple(nodes)),))


class TestResolveDependencies:
    def test_fixture_orders_references_first(self, annotated_model):
        plan = resolve_dependencies(annotated_model)
        position = {key: i for i, key in enumerate(plan)}
        assert position[("1.5", "Streaming count")] < position[("2.5", "Cumulative Streaming")]
        assert position[("1.2", "Streaming count")] < position[("2.2", "Receive advertising income")]
        assert len(plan) == 4

    def test_annotation_free_model_has_empty_plan(self, streamer_model):
        assert resolve_dependencies(streamer_model) == ()

    def test_two_cycle(self):
        model = _model(
            ("1.1", "a", "(1.2,b)+1", None),
            ("1.2", "b", "(1.1,a)+1", None),
        )
        with pytest.raises(CycleError) as info:
            resolve_dependencies(model)
        assert set(info.value.members) == {("1.1", "a"), ("1.2", "b")}

    def test_self_loop(self):
        model = _model(("1.1", "a", "(1.1,a)+1", None))
        with pytest.raises(CycleError) as info:
            resolve_dependencies(model)
        assert info.value.members == (("1.1", "a"),)

    def test_dangling_reference_names_missing_task(self):
        model = _model(("1.1", "a", "(9.9,ghost)", None))
        with pytest.raises(UnknownReferenceError) as info:
            resolve_dependencies(model)
        assert "9.9" in str(info.value)

    def test_dangling_reference_names_missing_kpi(self):
        model = _model(("1.1", "a", "(1.2,ghost)", None), ("1.2", "b", "1", None))
        with pytest.raises(UnknownReferenceError) as info:
            resolve_dependencies(model)
        assert "ghost" in str(info.value)

    def test_target_references_count_as_edges(self):
        model = _model(
            ("1.1", "a", "1", "(1.2,b)"),
            ("1.2", "b", "1", "(1.1,a)"),
        )
        with pytest.raises(CycleError):
            resolve_dependencies(model)


class TestEvaluate:
    def test_fixture_currents(self, annotated_model):
        result = evaluate(annotated_model)
        values = result.values
        assert values[("1.5", "Streaming count")].current == Decimal("3210")
        assert values[("2.5", "Cumulative Streaming")].current == Decimal("1444.50")
        assert values[("1.2", "Streaming count")].current == Decimal("12342")
        assert values[("2.2", "Receive advertising income")].current == Decimal("6171.00")

    def test_fixture_targets_use_target_scenario(self, annotated_model):
        result = evaluate(annotated_model)
        values = result.values
        assert values[("1.5", "Streaming count")].target == Decimal("20000")
        assert values[("1.2", "Streaming count")].target == Decimal("40000")
        assert values[("2.2", "Receive advertising income")].target == Decimal("20000")
        assert values[("2.5", "Cumulative Streaming")].target == Decimal("10000")

    def test_every_annotated_kpi_appears_exactly_once(self, annotated_model):
        result = evaluate(annotated_model)
        assert len(result.values) == 4

    def test_plan_order_independence(self, annotated_model):
        plan = resolve_dependencies(annotated_model)
        baseline = evaluate(annotated_model)
        checked = 0
        for candidate in itertools.permutations(plan):
            index = {key: i for i, key in enumerate(candidate)}
            if index[("1.5", "Streaming count")] > index[("2.5", "Cumulative Streaming")]:
                continue
            if index[("1.2", "Streaming count")] > index[("2.2", "Receive advertising income")]:
                continue
            checked += 1
            assert evaluate(annotated_model, plan=tuple(candidate)) == baseline
        assert checked == 6  # 4!/(2*2) valid topological orders

    def test_invalid_plan_rejected(self, annotated_model):
        plan = resolve_dependencies(annotated_model)
        with pytest.raises(PlanError):
            evaluate(annotated_model, plan=plan[:2])
        bad = (
            ("2.5", "Cumulative Streaming"),
            ("1.5", "Streaming count"),
            ("1.2", "Streaming count"),
            ("2.2", "Receive advertising income"),
        )
        with pytest.raises(PlanError):
            evaluate(annotated_model, plan=bad)

    def test_substitution_soundness(self, annotated_model):
        baseline = evaluate(annotated_model)
        pool, node = annotated_model.task_by_display_id("2.5")
        current = substitute(
            node.annotation.current,
            "1.5",
            "Streaming count",
            baseline.values[("1.5", "Streaming count")].current,
        )
        patched = annotated_model.replace_task(
            pool.id, replace(node, annotation=replace(node.annotation, current=current))
        )
        assert evaluate(patched).values == baseline.values

    def test_division_by_zero_is_positioned(self):
        model = _model(("1.1", "a", "10/0", None))
        with pytest.raises(DivisionByZeroError) as info:
            evaluate(model)
        assert "column" in (info.value.location or "")

    def test_reference_to_missing_column(self):
        model = _model(("1.1", "a", None, "5"), ("1.2", "b", "(1.1,a)", None))
        with pytest.raises(UnknownReferenceError) as info:
            evaluate(model)
        assert "current" in str(info.value)

    def test_evaluation_never_runs_on_cyclic_model(self):
        model = _model(
            ("1.1", "a", "(1.2,b)", None),
            ("1.2", "b", "(1.1,a)", None),
        )
        with pytest.raises(CycleError):
            evaluate(model)


class TestAttachAnnotation:
    def test_attach_stream_song_annotation(self, streamer_model):
        annotation = CbAnnotation(
            actor="Streamer",
            type=AnnotationType.ACTIVITY,
            goal="Profitability",
            kpi="Streaming count",
            current=Literal(Decimal("3210")),
            target=Literal(Decimal("20000")),
        )
        model = attach_annotation(streamer_model, "1.5", annotation)
        assert model.task_by_display_id("1.5")[1].annotation == annotation
        # original model untouched
        assert streamer_model.task_by_display_id("1.5")[1].annotation.kpi == ""

    def test_attach_to_unknown_display_id(self, streamer_model):
        annotation = CbAnnotation(actor="Streamer", type=AnnotationType.COST)
        with pytest.raises(AnnotationError) as info:
            attach_annotation(streamer_model, "9.9", annotation)
        assert "9.9" in str(info.value)

    def test_actor_pool_mismatch(self, streamer_model):
        annotation = CbAnnotation(actor="Advertiser", type=AnnotationType.COST)
        with pytest.raises(AnnotationError) as info:
            attach_annotation(streamer_model, "1.5", annotation)
        assert "Advertiser" in str(info.value)

    def test_apply_annotations_round_trip_through_xml(self, annotated_model):
        from cbtracker import parse_bpmn, serialize_bpmn

        assert parse_bpmn(serialize_bpmn(annotated_model)) == annotated_model
