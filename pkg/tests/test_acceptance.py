"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
All tolerances are exact decimal equality; no floating point anywhere.
"""

import itertools
import random
from decimal import Decimal

import pytest
from hypothesis import given, settings
from fastapi.testclient import TestClient

from cbtracker import (
    CycleError,
    Role,
    UnknownReferenceError,
    actor_overview,
    evaluate,
    evaluate_formula,
    format_formula,
    parse_bmr,
    parse_bpmn,
    parse_formula,
    resolve_dependencies,
    serialize_bmr,
    serialize_bpmn,
    transform,
)
from cbtracker.service import ProjectState, create_app

from .conftest import fixture_text
from .strategies import formulas, radars
from .test_kpi import _model
from .test_transform import _radar_counts

EXPECTED_MESSAGE_EDGES = [
    ("Stream advertising", "Listen advertising"),
    ("Stream song", "Play song"),
    ("Produce advertising", "Acquire visibility"),
    ("Request advertising", "Stream advertising"),
    ("Pay advertising", "Receive advertising income"),
    ("Acquire music rights", "Acquire streaming rights"),
    ("Pay streaming costs", "Receive streaming payment"),
]


def _passed(criterion: int, detail: str) -> None:
    print(f"[acceptance] criterion {criterion} PASS: {detail}")


def test_criterion_1_fixture_transformation(streamer_radar, streamer_hints):
    model = transform(streamer_radar, streamer_hints)
    assert [p.name for p in model.pools] == [
        "Free User", "Streamer", "Advertiser", "Record Label",
    ]
    assert sum(len(p.tasks) for p in model.pools) == 16

    names = {n.id: n.name for p in model.pools for n in p.nodes}
    edges = [(names[f.source], names[f.target]) for f in model.message_flows]
    assert edges == EXPECTED_MESSAGE_EDGES

    for pool in model.pools:
        # start event, linear task chain, end event
        kinds = [n.kind.value for n in pool.nodes]
        assert kinds[0] == "startEvent" and kinds[-1] == "endEvent"
        assert all(k == "task" for k in kinds[1:-1])
        assert len(pool.sequence_flows) == len(pool.nodes) - 1
        chained = {pool.nodes[0].id}
        position = {n.id: i for i, n in enumerate(pool.nodes)}
        for flow in sorted(pool.sequence_flows, key=lambda f: position[f.source]):
            assert flow.source in chained
            chained.add(flow.target)
        assert chained == set(position)

    assert serialize_bpmn(model) == fixture_text("streamer.bpmn")
    _passed(1, "4 pools, 16 tasks, 7 message flows, linear chains, golden bytes equal")


def test_criterion_2_paper_formulas_parse_and_evaluate():
    streaming_cost = parse_formula("(1.5,Streaming count)*0,45")
    value = evaluate_formula(streaming_cost, lambda t, k: Decimal("3210"))
    assert value == Decimal("1444.50")

    ad_income = parse_formula("(1.2, Streaming count)*0.5")
    value = evaluate_formula(ad_income, lambda t, k: Decimal("12342"))
    assert value == Decimal("6171.00")
    _passed(2, "verbatim formulas evaluate to 1444.50 and 6171.00 exactly")


def test_criterion_3_streamer_overview(annotated_model):
    overview = actor_overview(evaluate(annotated_model), annotated_model, "Streamer")
    assert overview.current_costs == Decimal("1444.50")
    assert overview.current_benefits == Decimal("6171.00")
    assert overview.current_net == Decimal("4726.50")
    assert overview.target_costs == Decimal("10000.00")
    assert overview.target_benefits == Decimal("20000.00")
    assert overview.target_net == Decimal("10000.00")
    _passed(3, "current 1444.50/6171.00/4726.50, target 10000.00/20000.00/10000.00")


class TestCriterion4RoundTrips:
    @settings(max_examples=120, deadline=None)
    @given(radars())
    def test_bmr_round_trip(self, radar):
        assert parse_bmr(serialize_bmr(radar)) == radar

    @settings(max_examples=120, deadline=None)
    @given(radars())
    def test_bpmn_round_trip_generated(self, radar):
        model = transform(radar)
        assert parse_bpmn(serialize_bpmn(model)) == model

    def test_bpmn_round_trip_golden(self, streamer_model, annotated_model):
        assert parse_bpmn(fixture_text("streamer.bpmn")) == streamer_model
        assert parse_bpmn(fixture_text("streamer.annotated.bpmn")) == annotated_model
        assert serialize_bpmn(annotated_model) == fixture_text("streamer.annotated.bpmn")

    @settings(max_examples=1000, deadline=None)
    @given(formulas)
    def test_formula_round_trip(self, expr):
        assert parse_formula(format_formula(expr)) == expr

    def test_report_pass_line(self):
        _passed(4, "BMR 120 radars, BPMN golden+120 generated, 1000 formula ASTs")


class TestCriterion5DependencyCorrectness:
    def test_topological_order_invariance(self, annotated_model):
        plan = resolve_dependencies(annotated_model)
        baseline = evaluate(annotated_model)
        valid_orders = 0
        for candidate in itertools.permutations(plan):
            index = {key: i for i, key in enumerate(candidate)}
            if index[("1.5", "Streaming count")] > index[("2.5", "Cumulative Streaming")]:
                continue
            if index[("1.2", "Streaming count")] > index[("2.2", "Receive advertising income")]:
                continue
            valid_orders += 1
            assert evaluate(annotated_model, plan=tuple(candidate)) == baseline
        assert valid_orders == 6

    def test_two_cycle_names_all_members(self):
        model = _model(
            ("1.1", "a", "(1.2,b)", None),
            ("1.2", "b", "(1.1,a)", None),
        )
        with pytest.raises(CycleError) as info:
            evaluate(model)
        assert set(info.value.members) == {("1.1", "a"), ("1.2", "b")}

    def test_self_loop_names_member(self):
        model = _model(("1.1", "a", "(1.1,a)", None))
        with pytest.raises(CycleError) as info:
            evaluate(model)
        assert info.value.members == (("1.1", "a"),)

    def test_dangling_reference_names_missing_id(self):
        model = _model(("1.1", "a", "(9.9,ghost)", None))
        with pytest.raises(UnknownReferenceError) as info:
            evaluate(model)
        assert "9.9" in str(info.value)

    def test_report_pass_line(self):
        _passed(5, "plan-order invariance, cycles and dangling references reported")


class TestCriterion6Conservation:
    @settings(max_examples=120, deadline=None)
    @given(radars())
    def test_conservation_and_pool_order(self, radar):
        model = transform(radar)
        costs, activities, benefits = _radar_counts(radar)
        assert sum(len(p.tasks) for p in model.pools) == costs + activities + benefits
        rank = {Role.USER: 0, Role.FOCAL: 1, Role.PARTNER: 2}
        ranks = [rank[p.role] for p in model.pools]
        assert ranks == sorted(ranks)

    def test_report_pass_line(self):
        _passed(6, "task count equals costs+activities+benefits; user < focal < partner")


def test_criterion_7_whatif_isolation(annotated_model):
    client = TestClient(create_app(ProjectState(model=annotated_model)))
    baseline = client.post("/v1/evaluate").json()
    streamer = next(o for o in baseline["overviews"] if o["actor"] == "Streamer")
    assert streamer["currentNet"] == "4726.50"

    rng = random.Random(7)
    keys = [
        ("1.5", "Streaming count"),
        ("1.2", "Streaming count"),
        ("2.5", "Cumulative Streaming"),
        ("2.2", "Receive advertising income"),
    ]
    for _ in range(10):
        task, kpi = rng.choice(keys)
        body = {
            "overrides": [
                {"taskDisplayId": task, "kpiName": kpi, "current": rng.randint(0, 10**6)}
            ]
        }
        assert client.post("/v1/whatif", json=body).status_code == 200
    assert client.post("/v1/evaluate").json() == baseline
    _passed(7, "10 random what-if calls leave the baseline overview at 4726.50")
