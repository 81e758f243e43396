#!/usr/bin/env python3
"""Record real /v1 responses for the frontend test suite.

The web UI never computes financial numbers, so its tests replay
responses produced by the actual service. Regenerate after changing the
fixtures or the evaluation semantics:

    python3 scripts/gen_ui_fixtures.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fastapi.testclient import TestClient

from cbtracker import (
    apply_annotations,
    load_annotations,
    load_hints,
    parse_bmr,
    parse_bpmn,
    serialize_bpmn,
    transform,
)
from cbtracker.service import ProjectState, create_app

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
OUT = ROOT / "frontend" / "tests" / "fixtures"


def main() -> None:
    radar = parse_bmr((FIXTURES / "streamer.bmr.json").read_text(encoding="utf-8"))
    hints = load_hints((FIXTURES / "streamer.hints.json").read_text(encoding="utf-8"))
    entries = load_annotations(
        (FIXTURES / "streamer.annotations.json").read_text(encoding="utf-8")
    )
    model = apply_annotations(transform(radar, hints), entries)
    # go through the serialized form, exactly like `cbtracker serve --bpmn`
    model = parse_bpmn(serialize_bpmn(model))

    client = TestClient(create_app(ProjectState(model=model, radar=radar)))
    OUT.mkdir(parents=True, exist_ok=True)

    recordings = {
        "model.json": client.get("/v1/model").json(),
        "radar.json": client.get("/v1/radar").json(),
        "evaluate.json": client.post("/v1/evaluate").json(),
        "whatif_6420.json": client.post(
            "/v1/whatif",
            json={"overrides": [
                {"taskDisplayId": "1.5", "kpiName": "Streaming count", "current": 6420}
            ]},
        ).json(),
    }
    for name, payload in recordings.items():
        (OUT / name).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        print(f"wrote frontend/tests/fixtures/{name}")


if __name__ == "__main__":
    main()
