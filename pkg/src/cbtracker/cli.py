"""Command-line entry point: validate, transform, annotate, eval, serve.

Exit codes: 0 success, 1 validation findings or pipeline errors, 2 I/O
errors. Set ``CBTRACKER_LOG`` to control the log level.
"""

from __future__ import annotations

import logging
import os
import sys
from pathlib import Path

import click

from .annotation import load_annotations
from .bmr import BmrError, parse_bmr, validate_bmr
from .bpmn import parse_bpmn, serialize_bpmn, validate_structure
from .errors import CbtError
from .kpi import apply_annotations, evaluate
from .report import EXPORT_FORMATS, CostBenefitReport, export_report, full_report
from .transform import EMPTY_HINTS, load_hints, transform

log = logging.getLogger("cbtracker")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc.strerror}", err=True)
        sys.exit(2)


def _write(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc.strerror}", err=True)
        sys.exit(2)


def _fail(exc: CbtError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Cost-Benefit Tracker: radar to process to cost-benefit analysis."""
    logging.basicConfig(level=os.environ.get("CBTRACKER_LOG", "WARNING").upper())


@main.command()
@click.argument("paths", nargs=-1, required=True)
def validate(paths: tuple[str, ...]) -> None:
    """Validate radar (.bmr.json) or process (.bpmn) documents."""
    findings = 0
    for path in paths:
        text = _read(path)
        try:
            if path.endswith((".bpmn", ".xml")):
                report = validate_structure(parse_bpmn(text))
            else:
                report = validate_bmr(parse_bmr(text, validate=False))
        except CbtError as exc:
            click.echo(f"{path}: error: {exc}")
            findings += 1
            continue
        for finding in report:
            click.echo(f"{path}: {finding}")
            findings += 1
    sys.exit(1 if findings else 0)


@main.command("transform")
@click.option("--radar", required=True, help="BMR-JSON input document.")
@click.option("--hints", default=None, help="Wiring-hints JSON document.")
@click.option("--out", required=True, help="Output BPMN file.")
def transform_cmd(radar: str, hints: str | None, out: str) -> None:
    """Transform a radar into a BPMN collaboration diagram."""
    try:
        radar_doc = parse_bmr(_read(radar))
        hint_doc = load_hints(_read(hints)) if hints else EMPTY_HINTS
        model = transform(radar_doc, hint_doc)
        xml = serialize_bpmn(model)
    except CbtError as exc:
        _fail(exc)
    _write(out, xml)
    log.info("wrote %s", out)


@main.command()
@click.option("--bpmn", required=True, help="BPMN input file.")
@click.option("--annotations", required=True, help="Annotations JSON document.")
@click.option("--out", required=True, help="Output BPMN file.")
def annotate(bpmn: str, annotations: str, out: str) -> None:
    """Attach KPI annotations to tasks of a BPMN file."""
    try:
        model = parse_bpmn(_read(bpmn))
        entries = load_annotations(_read(annotations))
        xml = serialize_bpmn(apply_annotations(model, entries))
    except CbtError as exc:
        _fail(exc)
    _write(out, xml)


@main.command("eval")
@click.option("--bpmn", required=True, help="Annotated BPMN input file.")
@click.option("--format", "fmt", default="text-table", type=click.Choice(EXPORT_FORMATS))
@click.option("--actor", default=None, help="Restrict the report to one actor.")
@click.option("--out", default=None, help="Write the report to a file instead of stdout.")
def eval_cmd(bpmn: str, fmt: str, actor: str | None, out: str | None) -> None:
    """Evaluate KPI formulas and print the cost-benefit report."""
    try:
        model = parse_bpmn(_read(bpmn))
        report = full_report(evaluate(model), model)
        if actor is not None:
            overview = next((o for o in report.overviews if o.actor == actor), None)
            if overview is None:
                raise BmrError(f"unknown actor {actor!r}", location=actor)
            report = CostBenefitReport(
                overviews=(overview,),
                focal_actor=report.focal_actor if report.focal_actor == actor else None,
            )
        content = export_report(report, fmt)
    except CbtError as exc:
        _fail(exc)
    if out is None:
        click.echo(content, nl=False)
    else:
        _write(out, content)


@main.command()
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--bpmn", default=None, help="Preload this BPMN file as the project model.")
@click.option("--radar", default=None, help="Preload this radar for the UI.")
@click.option("--ui", default=None, help="Directory with the web UI static bundle.")
def serve(port: int, host: str, bpmn: str | None, radar: str | None, ui: str | None) -> None:
    """Serve the HTTP JSON API (and the web UI when --ui is given)."""
    import uvicorn

    from .service import ProjectState, create_app

    state = ProjectState()
    try:
        if bpmn:
            state.model = parse_bpmn(_read(bpmn))
        if radar:
            state.radar = parse_bmr(_read(radar))
    except CbtError as exc:
        _fail(exc)
    if ui is None and Path("frontend/dist").is_dir():
        ui = "frontend/dist"
    app = create_app(state, ui_dir=ui)
    uvicorn.run(app, host=host, port=port, log_level=os.environ.get("CBTRACKER_LOG", "warning").lower())


if __name__ == "__main__":
    main()
