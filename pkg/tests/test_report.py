import json
from decimal import Decimal

import pytest

from cbtracker import (
    AnnotationType,
    actor_overview,
    evaluate,
    export_report,
    full_report,
    transform,
)
from cbtracker.kpi import EvaluationResult
from cbtracker.report import ReportError

from .test_transform import _mini_radar


@pytest.fixture(scope="module")
def fixture_report(annotated_model):
    result = evaluate(annotated_model)
    return result, annotated_model


class TestActorOverview:
    def test_streamer_current_totals(self, fixture_report):
        result, model = fixture_report
        overview = actor_overview(result, model, "Streamer")
        assert overview.current_costs == Decimal("1444.50")
        assert overview.current_benefits == Decimal("6171.00")
        assert overview.current_net == Decimal("4726.50")

    def test_streamer_target_totals(self, fixture_report):
        result, model = fixture_report
        overview = actor_overview(result, model, "Streamer")
        assert overview.target_costs == Decimal("10000.00")
        assert overview.target_benefits == Decimal("20000.00")
        assert overview.target_net == Decimal("10000.00")

    def test_activity_kpis_are_line_items_but_not_totals(self, fixture_report):
        result, model = fixture_report
        overview = actor_overview(result, model, "Streamer")
        assert len(overview.line_items) == 4
        counts = [i for i in overview.line_items if i.type is AnnotationType.ACTIVITY]
        assert {i.kpi for i in counts} == {"Streaming count"}

    def test_unannotated_actor_is_all_zero(self, fixture_report):
        result, model = fixture_report
        overview = actor_overview(result, model, "Record Label")
        assert overview.line_items == ()
        assert overview.current_costs == 0
        assert overview.current_net == 0
        assert overview.target_net == 0

    def test_unknown_actor(self, fixture_report):
        result, model = fixture_report
        with pytest.raises(ReportError):
            actor_overview(result, model, "Nobody")

    def test_net_identity_holds_exactly(self, fixture_report):
        result, model = fixture_report
        for pool in model.pools:
            overview = actor_overview(result, model, pool.name)
            assert overview.current_benefits - overview.current_costs == overview.current_net
            assert overview.target_benefits - overview.target_costs == overview.target_net

    def test_line_item_sums_match_totals(self, fixture_report):
        result, model = fixture_report
        overview = actor_overview(result, model, "Streamer")
        cost_sum = sum(
            i.current for i in overview.line_items
            if i.type is AnnotationType.COST and i.current is not None
        )
        benefit_sum = sum(
            i.current for i in overview.line_items
            if i.type is AnnotationType.BENEFIT and i.current is not None
        )
        assert cost_sum == overview.current_costs
        assert benefit_sum == overview.current_benefits


class TestFullReport:
    def test_fixture_has_four_overviews_with_focal_flag(self, fixture_report):
        result, model = fixture_report
        report = full_report(result, model)
        assert [o.actor for o in report.overviews] == [
            "Free User",
            "Streamer",
            "Advertiser",
            "Record Label",
        ]
        assert report.focal_actor == "Streamer"

    def test_single_actor_model(self):
        model = transform(_mini_radar())
        report = full_report(evaluate(model), model)
        assert len(report.overviews) == 2

    def test_unevaluated_model_is_a_precondition_error(self, annotated_model):
        empty = EvaluationResult(values={})
        with pytest.raises(ReportError) as info:
            full_report(empty, annotated_model)
        assert "not evaluated" in str(info.value)

    def test_report_is_pure(self, fixture_report):
        result, model = fixture_report
        assert full_report(result, model) == full_report(result, model)


class TestExport:
    def test_json_contains_streamer_net(self, fixture_report):
        result, model = fixture_report
        text = export_report(full_report(result, model), "json")
        obj = json.loads(text)
        streamer = next(o for o in obj["overviews"] if o["actor"] == "Streamer")
        assert streamer["currentNet"] == "4726.50"
        assert obj["summary"]["focalActor"] == "Streamer"
        assert obj["summary"]["focalCurrentNet"] == "4726.50"
        assert '"currentNet": "4726.50"' in text

    def test_json_goal_subtotals_experimental(self, fixture_report):
        result, model = fixture_report
        obj = json.loads(export_report(full_report(result, model), "json"))
        streamer = next(o for o in obj["overviews"] if o["actor"] == "Streamer")
        subtotals = streamer["experimentalGoalSubtotals"]["Profitability"]
        assert subtotals["currentCosts"] == "1444.50"
        assert subtotals["currentBenefits"] == "6171.00"

    def test_csv_columns_and_rows(self, fixture_report):
        result, model = fixture_report
        text = export_report(full_report(result, model), "csv")
        lines = text.splitlines()
        assert lines[0] == "actor,taskDisplayId,taskName,type,goal,kpi,current,target"
        assert len(lines) == 5  # header + 4 annotated tasks
        assert "Streamer,2.5,Pay streaming costs,cost,Profitability,Cumulative Streaming,1444.50,10000.00" in lines

    def test_counts_render_without_forced_decimals(self, fixture_report):
        result, model = fixture_report
        text = export_report(full_report(result, model), "csv")
        assert "Streaming count,3210,20000" in text

    def test_empty_report_per_format(self):
        from cbtracker.report import CostBenefitReport

        empty = CostBenefitReport(overviews=())
        assert json.loads(export_report(empty, "json")) == {
            "overviews": [],
            "summary": {"focalActor": None, "focalCurrentNet": None, "focalTargetNet": None},
        }
        assert export_report(empty, "csv") == (
            "actor,taskDisplayId,taskName,type,goal,kpi,current,target\n"
        )
        assert export_report(empty, "text-table") == ""

    def test_export_twice_is_byte_identical(self, fixture_report):
        result, model = fixture_report
        report = full_report(result, model)
        for fmt in ("json", "csv", "text-table"):
            assert export_report(report, fmt) == export_report(report, fmt)

    def test_unknown_format(self, fixture_report):
        result, model = fixture_report
        with pytest.raises(ReportError):
            export_report(full_report(result, model), "yaml")
