#!/usr/bin/env python3
"""Regenerate the golden BPMN fixtures from the source documents.

Run from the repository root:

    python scripts/regen_goldens.py

Overwrites fixtures/streamer.bpmn (transform output) and
fixtures/streamer.annotated.bpmn (with the KPI annotations applied).
The outputs are deterministic; diff before committing.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cbtracker import (
    apply_annotations,
    load_annotations,
    load_hints,
    parse_bmr,
    serialize_bpmn,
    transform,
)

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def main() -> None:
    radar = parse_bmr((FIXTURES / "streamer.bmr.json").read_text(encoding="utf-8"))
    hints = load_hints((FIXTURES / "streamer.hints.json").read_text(encoding="utf-8"))
    model = transform(radar, hints)
    (FIXTURES / "streamer.bpmn").write_text(serialize_bpmn(model), encoding="utf-8")
    print("wrote fixtures/streamer.bpmn")

    entries = load_annotations(
        (FIXTURES / "streamer.annotations.json").read_text(encoding="utf-8")
    )
    annotated = apply_annotations(model, entries)
    (FIXTURES / "streamer.annotated.bpmn").write_text(
        serialize_bpmn(annotated), encoding="utf-8"
    )
    print("wrote fixtures/streamer.annotated.bpmn")


if __name__ == "__main__":
    main()
