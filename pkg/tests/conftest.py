import pathlib

import pytest

from cbtracker import (
    apply_annotations,
    load_annotations,
    load_hints,
    parse_bmr,
    transform,
)

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def streamer_radar():
    return parse_bmr(fixture_text("streamer.bmr.json"))


@pytest.fixture(scope="session")
def streamer_hints():
    return load_hints(fixture_text("streamer.hints.json"))


@pytest.fixture(scope="session")
def streamer_model(streamer_radar, streamer_hints):
    return transform(streamer_radar, streamer_hints)


@pytest.fixture(scope="session")
def streamer_annotations():
    return load_annotations(fixture_text("streamer.annotations.json"))


@pytest.fixture(scope="session")
def annotated_model(streamer_model, streamer_annotations):
    return apply_annotations(streamer_model, streamer_annotations)
