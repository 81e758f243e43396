import dataclasses

import pytest
from hypothesis import given, settings

from cbtracker import (
    BusinessModelRadar,
    CoCreationActivity,
    CoCreationActor,
    Role,
    ValueProposition,
    parse_bmr,
    serialize_bmr,
    validate_bmr,
)
from cbtracker.bmr import BmrInvariantError, BmrSchemaError, BmrSyntaxError

from .conftest import fixture_text
from .strategies import radars

MINIMAL = """
{
  "bmrVersion": "1",
  "solution": "s",
  "actors": [
    {"name": "u", "role": "user",
     "valuePropositions": [{"name": "v", "activities": [{"name": "a", "costs": [], "benefits": []}]}]},
    {"name": "f", "role": "focal",
     "valuePropositions": [{"name": "v", "activities": [{"name": "b", "costs": [], "benefits": []}]}]}
  ]
}
"""


def _minimal_actor(name="x", role=Role.USER, **kwargs):
    return CoCreationActor(
        name=name,
        role=role,
        value_propositions=(
            ValueProposition(name="v", activities=(CoCreationActivity(name="a"),)),
        ),
        **kwargs,
    )


class TestParse:
    def test_streamer_fixture(self):
        radar = parse_bmr(fixture_text("streamer.bmr.json"))
        assert radar.solution == "ad-supported music streaming"
        assert [a.name for a in radar.actors] == [
            "Free User",
            "Streamer",
            "Advertiser",
            "Record Label",
        ]
        assert [a.role for a in radar.actors] == [
            Role.USER,
            Role.FOCAL,
            Role.PARTNER,
            Role.PARTNER,
        ]

    def test_minimal_document(self):
        radar = parse_bmr(MINIMAL)
        assert len(radar.actors) == 2
        assert validate_bmr(radar).ok

    def test_two_focal_actors_rejected(self):
        doc = MINIMAL.replace('"role": "user"', '"role": "focal"')
        with pytest.raises(BmrInvariantError):
            parse_bmr(doc)

    def test_syntax_error_carries_position(self):
        with pytest.raises(BmrSyntaxError) as info:
            parse_bmr("{ not json")
        assert "line" in (info.value.location or "")

    def test_missing_role_is_schema_error(self):
        doc = MINIMAL.replace('"role": "user",', "")
        with pytest.raises(BmrSchemaError) as info:
            parse_bmr(doc)
        assert "role" in str(info.value)

    def test_duplicate_actor_name_is_schema_error(self):
        doc = MINIMAL.replace('"name": "f"', '"name": "u"')
        with pytest.raises(BmrSchemaError):
            parse_bmr(doc)

    def test_unknown_version_rejected(self):
        with pytest.raises(BmrSchemaError):
            parse_bmr('{"bmrVersion": "2", "solution": "s", "actors": []}')


class TestValidate:
    def test_streamer_fixture_is_clean(self):
        radar = parse_bmr(fixture_text("streamer.bmr.json"))
        assert len(validate_bmr(radar)) == 0

    def test_actor_without_value_propositions(self):
        radar = BusinessModelRadar(
            solution="s",
            actors=(
                _minimal_actor("u", Role.USER),
                dataclasses.replace(_minimal_actor("f", Role.FOCAL), value_propositions=()),
            ),
        )
        report = validate_bmr(radar)
        assert [f.path for f in report] == ["actors[1].valuePropositions"]

    def test_duplicate_cost_label_within_actor(self):
        # oracle: the label set of the actor has lower cardinality than the
        # label list, so exactly one duplicate finding must be reported
        activity = CoCreationActivity(name="play song", costs=("listen ads",))
        twin = CoCreationActivity(name="share song", costs=("listen ads",))
        actor = CoCreationActor(
            name="u",
            role=Role.USER,
            value_propositions=(ValueProposition(name="v", activities=(activity, twin)),),
        )
        labels = [c for vp in actor.value_propositions for a in vp.activities for c in a.costs]
        assert len(set(labels)) == len(labels) - 1
        radar = BusinessModelRadar(
            solution="s", actors=(actor, _minimal_actor("f", Role.FOCAL))
        )
        report = validate_bmr(radar)
        duplicates = [f for f in report if "duplicate cost label" in f.message]
        assert len(duplicates) == 1
        assert duplicates[0].path == "actors[0].valuePropositions[0].activities[1].costs[0]"

    def test_no_user_actor(self):
        radar = BusinessModelRadar(solution="s", actors=(_minimal_actor("f", Role.FOCAL),))
        report = validate_bmr(radar)
        assert any("user" in f.message for f in report)

    def test_validation_is_pure(self, streamer_radar):
        assert validate_bmr(streamer_radar) == validate_bmr(streamer_radar)


class TestSerialize:
    def test_streamer_round_trip(self, streamer_radar):
        assert parse_bmr(serialize_bmr(streamer_radar)) == streamer_radar

    def test_minimal_round_trip(self):
        radar = parse_bmr(MINIMAL)
        assert parse_bmr(serialize_bmr(radar)) == radar

    def test_serialize_twice_is_byte_identical(self, streamer_radar):
        assert serialize_bmr(streamer_radar) == serialize_bmr(streamer_radar)

    @settings(max_examples=150)
    @given(radars())
    def test_round_trip_property(self, radar):
        assert validate_bmr(radar).ok
        assert parse_bmr(serialize_bmr(radar)) == radar

    @settings(max_examples=50)
    @given(radars())
    def test_order_preservation(self, radar):
        parsed = parse_bmr(serialize_bmr(radar))
        assert [a.name for a in parsed.actors] == [a.name for a in radar.actors]
        for ours, theirs in zip(radar.actors, parsed.actors):
            assert [vp.name for vp in ours.value_propositions] == [
                vp.name for vp in theirs.value_propositions
            ]
            for vp_a, vp_b in zip(ours.value_propositions, theirs.value_propositions):
                assert [a.name for a in vp_a.activities] == [a.name for a in vp_b.activities]
                for act_a, act_b in zip(vp_a.activities, vp_b.activities):
                    assert act_a.costs == act_b.costs
                    assert act_a.benefits == act_b.benefits
