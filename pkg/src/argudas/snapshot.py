"""Snapshot persistence: the whole loaded store as one JSON document.

Only direct annotations are persisted; propagation is recomputed on load
so the propagation logic stays the single source of truth.  Serialisation
is deterministic (sorted entries) so that save/load round-trips reproduce
identical query responses.
"""

from __future__ import annotations

import json

from .errors import FileMalformed
from .mapping import AnatomyAlignment, ThresholdTable
from .model import Annotation, AnnotationId, ExpressionRange, ResourceId, TheilerStage
from .ontology import AnatomyGraph
from .schemes import catalog_to_records, parse_scheme_catalog
from .store import Store

FORMAT_TAG = "argudas-snapshot/1"


def _graph_to_record(graph: AnatomyGraph) -> dict:
    return {
        "stage": int(graph.stage),
        "nodes": [{"id": t, "name": graph.names[t]} for t in sorted(graph.names)],
        "edges": [
            {"child": child, "parent": parent}
            for child in sorted(graph.parents)
            for parent in graph.parents[child]
        ],
    }


def _annotation_to_record(a: Annotation) -> dict:
    record = {
        "resource": a.id.resource.value,
        "id": a.id.local,
        "gene": a.gene,
        "tissue": a.tissue,
        "stage": int(a.stage),
        "level": a.level.label,
    }
    if a.probe_info is not None:
        record["probe_info"] = a.probe_info
    if a.technique is not None:
        record["technique"] = a.technique
    if a.source_url is not None:
        record["source_url"] = a.source_url
    if a.extra:
        record["extra"] = [[k, v] for k, v in a.extra]
    return record


def _annotation_from_record(record: dict) -> Annotation:
    return Annotation(
        id=AnnotationId(ResourceId.parse(record["resource"]), record["id"]),
        gene=record["gene"],
        tissue=record["tissue"],
        stage=TheilerStage(record["stage"]),
        level=ExpressionRange.from_label(record["level"]),
        direct=True,
        probe_info=record.get("probe_info"),
        technique=record.get("technique"),
        source_url=record.get("source_url"),
        extra=tuple((k, v) for k, v in record.get("extra", [])),
    )


def store_to_document(store: Store) -> dict:
    return {
        "version": FORMAT_TAG,
        "ontologies": [
            _graph_to_record(store.ontologies[stage]) for stage in sorted(store.ontologies)
        ],
        "alignment": [
            {
                "resource": resource.value,
                "source_term": term,
                "emap_tissue": tissue,
                "precision_loss": loss,
            }
            for (resource, term), (tissue, loss) in sorted(
                store.alignment.entries.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
            )
        ],
        "thresholds": [
            {"tissue": tissue, "t_weak": cuts[0], "t_moderate": cuts[1], "t_strong": cuts[2]}
            for tissue, cuts in sorted(store.thresholds.entries.items())
        ],
        "schemes": catalog_to_records(store.catalog),
        "annotations": [
            _annotation_to_record(a)
            for a in sorted(store.direct.values(), key=lambda a: str(a.id))
        ],
        "excluded": [[ref, reason] for ref, reason in store.excluded],
    }


def store_from_document(doc: dict, locator: str = "<memory>") -> Store:
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_TAG:
        raise FileMalformed(f"not a {FORMAT_TAG} document", locator)
    store = Store()
    from .ontology import parse_ontology  # local import to avoid cycle at module load

    for graph_doc in doc.get("ontologies", []):
        store.add_ontology(parse_ontology(graph_doc, locator=locator))
    store.alignment = AnatomyAlignment.from_records(doc.get("alignment", []))
    store.thresholds = ThresholdTable.from_records(doc.get("thresholds", []))
    store.catalog = parse_scheme_catalog(doc.get("schemes", []), locator=locator)
    for record in doc.get("annotations", []):
        try:
            store.add_direct(_annotation_from_record(record))
        except (KeyError, TypeError, ValueError) as exc:
            raise FileMalformed(f"bad annotation record: {exc}", locator)
    store.excluded = [(ref, reason) for ref, reason in doc.get("excluded", [])]
    store.recompute_propagation()
    return store


def save_snapshot(store: Store, path) -> None:
    document = store_to_document(store)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_snapshot(path) -> Store:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read snapshot: {exc}", locator=str(path))
    return store_from_document(doc, locator=str(path))
