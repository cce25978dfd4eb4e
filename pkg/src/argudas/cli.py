"""Command-line front door: ingest, query, argue, scheme scoring, serving.

Exit codes: 0 success, 2 parse/usage error, 3 data validation error,
4 unknown subject.
"""

from __future__ import annotations

import importlib.resources
import json
import shutil
import sys
from pathlib import Path
from typing import List, Optional

import click

from .argumentation import ArgueResult, Label, annotation_summary, run_argue
from .errors import (
    ArgudasError,
    BadStage,
    CycleDetected,
    DanglingEdge,
    DuplicateSchemeId,
    FileMalformed,
    MalformedCondition,
    StageMismatch,
)
from .ingest import ingest_file
from .mapping import load_alignment, load_thresholds
from .model import InterpretationProfile, Mode, Query, TheilerStage
from .ontology import load_ontology
from .schemes import (
    ExpertScore,
    agreement_report,
    catalog_to_records,
    load_scheme_catalog,
)
from .snapshot import load_snapshot, save_snapshot
from .store import Store

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNKNOWN_SUBJECT = 4

_VALIDATION_ERRORS = (
    CycleDetected,
    DanglingEdge,
    BadStage,
    StageMismatch,
    DuplicateSchemeId,
    MalformedCondition,
)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _data_path(name: str) -> Path:
    return Path(importlib.resources.files("argudas").joinpath("data", name))


def _load_store_from_snapshot(snapshot: Optional[str]) -> Store:
    if not snapshot:
        _fail("no snapshot given (use --snapshot or ARGUDAS_SNAPSHOT)", EXIT_PARSE)
    try:
        return load_snapshot(snapshot)
    except FileMalformed as exc:
        _fail(str(exc), EXIT_PARSE)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)


@click.group()
def main():
    """Workbench for judging gene expression claims across mouse atlases."""


@main.command()
@click.option("--annotations", "annotation_paths", multiple=True, required=True,
              type=click.Path(exists=False), help="Annotation file (repeatable).")
@click.option("--ontology", "ontology_paths", multiple=True, required=True,
              type=click.Path(exists=False), help="Per-stage anatomy file (repeatable).")
@click.option("--alignment", "alignment_path", type=click.Path(exists=False), default=None)
@click.option("--thresholds", "thresholds_path", type=click.Path(exists=False), default=None)
@click.option("--schemes", "schemes_path", type=click.Path(exists=False), default=None,
              help="Scheme catalog; the bundled default catalog is used when omitted.")
@click.option("--snapshot", "snapshot_out", type=click.Path(), default=None,
              help="Write the loaded store to this snapshot file.")
def ingest(annotation_paths, ontology_paths, alignment_path, thresholds_path,
           schemes_path, snapshot_out):
    """Load data files, report counts, and optionally persist a snapshot."""
    store = Store()
    try:
        for path in ontology_paths:
            store.add_ontology(load_ontology(path))
        if alignment_path:
            store.alignment = load_alignment(alignment_path)
        if thresholds_path:
            store.thresholds = load_thresholds(thresholds_path)
        store.catalog = load_scheme_catalog(schemes_path or _data_path("default_schemes.json"))
        report = None
        for path in annotation_paths:
            partial = ingest_file(path, store)
            if report is None:
                report = partial
            else:
                report.loaded += partial.loaded
                report.excluded += partial.excluded
                for resource, count in partial.per_resource.items():
                    report.per_resource[resource] = (
                        report.per_resource.get(resource, 0) + count
                    )
                report.derived = partial.derived
    except FileMalformed as exc:
        _fail(str(exc), EXIT_PARSE)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)
    except ArgudasError as exc:
        _fail(str(exc), EXIT_VALIDATION)

    click.echo(report.one_line())
    for resource in sorted(report.per_resource):
        click.echo(f"  {resource}: {report.per_resource[resource]}")
    for ref, reason in report.excluded:
        click.echo(f"  excluded {ref}: {reason.value}")
    if snapshot_out:
        save_snapshot(store, snapshot_out)
        click.echo(f"snapshot written to {snapshot_out}")


_TICK = {True: "+", False: "-"}
_STATUS = {Label.IN: "UNDEFEATED", Label.OUT: "DEFEATED", Label.UNDEC: "UNDECIDED"}


def _render_report(result: ArgueResult, expanded: bool, legacy: bool) -> List[str]:
    lines: List[str] = []
    if not result.report.groups:
        lines.append("no annotations in scope")
    for group in result.report.groups:
        subject = f"{group.gene} / {group.tissue} / TS{group.stage}"
        count = len(group.annotation_ids)
        plural = "s" if count != 1 else ""
        lines.append(f"== {subject} :: {group.label} ({count} annotation{plural})")
        for attribute in group.attributes:
            lines.append(f"  {_TICK[attribute.tick]} {attribute.name}")
        lines.append(f"    annotations: {', '.join(group.annotation_ids)}")
    if expanded and result.report.annotation_layer:
        lines.append("== annotation layer")
        for annotation_id, entries in result.report.annotation_layer.items():
            lines.append(annotation_id)
            width = max((len(e.name) for e in entries), default=0)
            for entry in entries:
                lines.append(
                    f"  {_TICK[entry.tick]} {entry.name.ljust(width)}  ({entry.scheme_id})"
                )
    if legacy:
        lines.append("== arguments (legacy evaluation)")
        if result.arguments:
            id_width = max(len(str(a.id)) for a in result.arguments)
            scheme_width = max(len(a.rule_id) for a in result.arguments)
            for argument in result.arguments:
                status = _STATUS[result.labelling[argument.id]]
                grounding = ", ".join(str(g) for g in argument.grounding)
                lines.append(
                    f"{str(argument.id).rjust(id_width)}  {status.ljust(10)}  "
                    f"conf={argument.confidence}  {argument.rule_id.ljust(scheme_width)}  "
                    f"[{grounding}]"
                )
        else:
            lines.append("no arguments generated")
    return lines


@main.command()
@click.option("--gene", default=None)
@click.option("--tissue", default=None)
@click.option("--stage", type=int, default=None)
@click.option("--mode", type=click.Choice(["presence", "level"]), default="presence")
@click.option("--prefer-direct", is_flag=True, default=False)
@click.option("--legacy", is_flag=True, default=False,
              help="Also evaluate arguments and print undefeated/defeated status.")
@click.option("--expanded", is_flag=True, default=False,
              help="Include the per-annotation attribute layer.")
@click.option("--snapshot", envvar="ARGUDAS_SNAPSHOT", type=click.Path(), default=None)
def argue(gene, tissue, stage, mode, prefer_direct, legacy, expanded, snapshot):
    """Render the two-layer tick/cross attribute report for a subject."""
    store = _load_store_from_snapshot(snapshot)
    if gene is None and tissue is None:
        _fail("at least one of --gene/--tissue is required", EXIT_PARSE)
    theiler = None
    if stage is not None:
        try:
            theiler = TheilerStage(stage)
        except BadStage as exc:
            _fail(str(exc), EXIT_VALIDATION)
    if tissue is not None and not store.known_tissue(tissue, stage):
        _fail(f"unknown tissue {tissue!r}", EXIT_UNKNOWN_SUBJECT)
    profile = InterpretationProfile(mode=Mode(mode), prefer_direct=prefer_direct)
    query = Query(gene=gene, tissue=tissue, stage=theiler, profile=profile)
    result = run_argue(query, store.all_annotations(), store.rules())
    for line in _render_report(result, expanded, legacy):
        click.echo(line)


@main.command()
@click.option("--gene", default=None)
@click.option("--tissue", default=None)
@click.option("--stage", type=int, default=None)
@click.option("--snapshot", envvar="ARGUDAS_SNAPSHOT", type=click.Path(), default=None)
def annotations(gene, tissue, stage, snapshot):
    """Print the annotation summary table for a query."""
    store = _load_store_from_snapshot(snapshot)
    if gene is None and tissue is None:
        _fail("at least one of --gene/--tissue is required", EXIT_PARSE)
    theiler = None
    if stage is not None:
        try:
            theiler = TheilerStage(stage)
        except BadStage as exc:
            _fail(str(exc), EXIT_VALIDATION)
    rows = annotation_summary(Query(gene=gene, tissue=tissue, stage=theiler),
                              store.all_annotations())
    if not rows:
        click.echo("no annotations matched")
        return
    header = ("stage", "resource", "id", "gene", "tissue", "level", "direct")
    table = [header] + [
        (f"TS{r.stage}", r.resource, r.local_id, r.gene, r.tissue, r.level,
         "direct" if r.direct else "propagated")
        for r in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    for row in table:
        click.echo("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())


@main.group()
def schemes():
    """Inspect, score, and compare argumentation schemes."""


def _load_catalog_for_schemes(schemes_path, snapshot):
    if schemes_path:
        return load_scheme_catalog(schemes_path), None
    if snapshot:
        store = _load_store_from_snapshot(snapshot)
        return store.catalog, store
    return load_scheme_catalog(_data_path("expert_review_scores.json")), None


@schemes.command("report")
@click.option("--schemes", "schemes_path", type=click.Path(exists=False), default=None,
              help="Catalog file; defaults to the bundled expert review fixture.")
@click.option("--snapshot", envvar="ARGUDAS_SNAPSHOT", type=click.Path(), default=None)
@click.option("--expert-a", default=None)
@click.option("--expert-b", default=None)
def schemes_report(schemes_path, snapshot, expert_a, expert_b):
    """Agreement statistics between two experts over a catalog."""
    try:
        catalog, _ = _load_catalog_for_schemes(schemes_path, snapshot)
    except FileMalformed as exc:
        _fail(str(exc), EXIT_PARSE)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)
    if expert_a is None or expert_b is None:
        experts = sorted({e for s in catalog for e in s.scores})
        if len(experts) != 2:
            _fail("give --expert-a/--expert-b (catalog does not have exactly two experts)",
                  EXIT_PARSE)
        expert_a, expert_b = experts
    try:
        report = agreement_report(catalog, expert_a, expert_b)
    except ArgudasError as exc:
        _fail(str(exc), EXIT_VALIDATION)
    click.echo(
        f"exact={report.exact} similar={report.similar} disagree={report.disagree} "
        f"broad={report.broad_agreement * 100:.1f}%"
    )


@schemes.command("score")
@click.argument("scheme_id")
@click.argument("expert")
@click.argument("value")
@click.option("--schemes", "schemes_path", type=click.Path(exists=False), default=None,
              help="Catalog file to update in place.")
@click.option("--snapshot", envvar="ARGUDAS_SNAPSHOT", type=click.Path(), default=None)
def schemes_score(scheme_id, expert, value, schemes_path, snapshot):
    """Record one expert's score for a scheme and persist it."""
    try:
        catalog, store = _load_catalog_for_schemes(schemes_path, snapshot)
    except FileMalformed as exc:
        _fail(str(exc), EXIT_PARSE)
    except _VALIDATION_ERRORS as exc:
        _fail(str(exc), EXIT_VALIDATION)
    if not schemes_path and not snapshot:
        _fail("scores need a writable --schemes file or --snapshot", EXIT_PARSE)
    target = None
    for scheme in catalog:
        if scheme.id == scheme_id:
            target = scheme
            break
    if target is None:
        _fail(f"no scheme with id {scheme_id!r}", EXIT_VALIDATION)
    try:
        target.scores[expert] = ExpertScore.from_symbol(value)
    except ValueError as exc:
        _fail(str(exc), EXIT_PARSE)
    if store is not None:
        save_snapshot(store, snapshot)
    else:
        with open(schemes_path, "w", encoding="utf-8") as fh:
            json.dump(catalog_to_records(catalog), fh, indent=2, sort_keys=True)
            fh.write("\n")
    click.echo(f"{scheme_id} {expert} = {value}")


@main.command()
@click.option("--snapshot", envvar="ARGUDAS_SNAPSHOT", type=click.Path(), required=True)
@click.option("--host", default="127.0.0.1")
@click.option("--port", envvar="ARGUDAS_PORT", type=int, default=8000)
def serve(snapshot, host, port):
    """Serve the HTTP API for a snapshot."""
    import uvicorn

    from .service import create_app

    store = _load_store_from_snapshot(snapshot)
    uvicorn.run(create_app(store), host=host, port=port)


@main.command()
@click.argument("out_dir", type=click.Path(file_okay=False))
def fixtures(out_dir):
    """Copy the bundled demo data files into OUT_DIR."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    demo_dir = _data_path("demo")
    copied = []
    for path in sorted(Path(demo_dir).glob("*.json")):
        shutil.copy(path, out / path.name)
        copied.append(path.name)
    click.echo(f"wrote {len(copied)} files to {out}: {', '.join(copied)}")


if __name__ == "__main__":
    main()
