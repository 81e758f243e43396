#!/usr/bin/env python3
"""End-to-end walkthrough of the ad-supported music-streaming example.

Parses the radar, transforms it into the collaboration diagram, applies
the KPI annotations, evaluates, and prints the per-actor overview plus a
what-if scenario with a doubled streaming count.
"""

import pathlib
import sys
from dataclasses import replace
from decimal import Decimal

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cbtracker import (
    Literal,
    apply_annotations,
    evaluate,
    export_report,
    full_report,
    load_annotations,
    load_hints,
    parse_bmr,
    transform,
)

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def main() -> None:
    radar = parse_bmr((FIXTURES / "streamer.bmr.json").read_text(encoding="utf-8"))
    hints = load_hints((FIXTURES / "streamer.hints.json").read_text(encoding="utf-8"))
    entries = load_annotations(
        (FIXTURES / "streamer.annotations.json").read_text(encoding="utf-8")
    )

    model = apply_annotations(transform(radar, hints), entries)
    print(f"solution: {radar.solution}")
    print(f"pools: {[p.name for p in model.pools]}")
    print(f"tasks: {sum(len(p.tasks) for p in model.pools)}, "
          f"message flows: {len(model.message_flows)}")
    print()
    print(export_report(full_report(evaluate(model), model), "text-table"))

    # what-if: double the streamed songs
    pool, node = model.task_by_display_id("1.5")
    patched = model.replace_task(
        pool.id,
        replace(node, annotation=replace(node.annotation, current=Literal(Decimal(6420)))),
    )
    print("what-if: Streaming count 3210 -> 6420")
    print(export_report(full_report(evaluate(patched), patched), "text-table"))


if __name__ == "__main__":
    main()
