"""File ingestion: native resource records to canonical stored annotations.

Every input record is either stored or listed as excluded with a reason;
nothing is dropped silently.  One annotation file may mix resources.
Records from the adult-brain atlases (ABA, GENSAT) default to Theiler
stage 28 when they do not state one.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .errors import (
    BadStage,
    FileMalformed,
    NegativeValue,
    NoThresholdOnPath,
    UnknownLabel,
    UnmappedTerm,
)
from .mapping import (
    NO_EXPERIMENT,
    map_aba_value,
    map_anatomy,
    map_emage_gxd_level,
    map_gensat_level,
)
from .model import Annotation, AnnotationId, ResourceId, TheilerStage
from .store import Store

_CORE_KEYS = {
    "resource",
    "id",
    "gene",
    "stage",
    "tissue",
    "level",
    "probe_info",
    "technique",
    "source_url",
}


class ExclusionReason(enum.Enum):
    NO_EXPERIMENT = "NoExperiment"
    UNMAPPED_TERM = "UnmappedTerm"
    UNKNOWN_LABEL = "UnknownLabel"
    BAD_STAGE = "BadStage"
    NO_THRESHOLD = "NoThreshold"


@dataclass
class IngestReport:
    loaded: int = 0
    derived: int = 0
    excluded: List[Tuple[str, ExclusionReason]] = field(default_factory=list)
    per_resource: Dict[str, int] = field(default_factory=dict)

    def one_line(self) -> str:
        return f"loaded={self.loaded} derived={self.derived} excluded={len(self.excluded)}"


def _record_ref(record: dict, index: int) -> str:
    resource = record.get("resource", "?")
    local = record.get("id", f"#{index}")
    return f"{resource}:{local}"


def _parse_stage(record: dict, resource: ResourceId, where: str):
    raw = record.get("stage")
    if raw is None:
        if resource in (ResourceId.ABA, ResourceId.GENSAT):
            return TheilerStage(28)
        raise FileMalformed("record has no stage", where)
    return TheilerStage(raw)


def _map_level(record: dict, resource: ResourceId, store: Store, tissue: str, stage, where: str):
    raw = record.get("level")
    if raw is None:
        raise FileMalformed("record has no level", where)
    if resource in (ResourceId.EMAGE, ResourceId.GXD):
        return map_emage_gxd_level(str(raw))
    if resource is ResourceId.GENSAT:
        return map_gensat_level(str(raw))
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise UnknownLabel(f"ABA level must be a decimal value, got {raw!r}") from None
    graph = store.graph_for_stage(int(stage))
    return map_aba_value(store.thresholds, graph, tissue, value)


def ingest_records(records: List[dict], store: Store, locator: str = "<memory>") -> IngestReport:
    """Normalise records into the store and recompute propagation.

    Structural problems (missing keys, unknown resource) abort with
    FileMalformed and a record locator; semantic problems exclude the one
    record with a reason.  Re-ingesting a file is idempotent: records are
    keyed by annotation id.
    """
    report = IngestReport()

    def exclude(ref: str, reason: ExclusionReason) -> None:
        report.excluded.append((ref, reason))
        if (ref, reason.value) not in store.excluded:  # keep re-ingest idempotent
            store.excluded.append((ref, reason.value))

    for index, record in enumerate(records):
        where = f"{locator} record {index}"
        if not isinstance(record, dict):
            raise FileMalformed("annotation record must be an object", where)
        try:
            resource = ResourceId.parse(str(record["resource"]))
            local_id = str(record["id"])
            gene = str(record["gene"])
        except (KeyError, ValueError, TypeError) as exc:
            raise FileMalformed(f"bad annotation record: {exc}", where)
        if not gene or not record.get("tissue"):
            raise FileMalformed("record needs nonempty gene and tissue", where)
        ref = _record_ref(record, index)

        try:
            stage = _parse_stage(record, resource, where)
            tissue, precision_loss = map_anatomy(store.alignment, resource, str(record["tissue"]))
            graph = store.graph_for_stage(int(stage))
            if tissue not in graph:
                raise UnmappedTerm(f"mapped tissue {tissue!r} is not in the stage anatomy")
            level = _map_level(record, resource, store, tissue, stage, where)
        except BadStage:
            exclude(ref, ExclusionReason.BAD_STAGE)
            continue
        except UnmappedTerm:
            exclude(ref, ExclusionReason.UNMAPPED_TERM)
            continue
        except (UnknownLabel, NegativeValue):
            exclude(ref, ExclusionReason.UNKNOWN_LABEL)
            continue
        except NoThresholdOnPath:
            exclude(ref, ExclusionReason.NO_THRESHOLD)
            continue

        if level is NO_EXPERIMENT:
            exclude(ref, ExclusionReason.NO_EXPERIMENT)
            continue

        probe_info = record.get("probe_info")
        if probe_info is not None and not isinstance(probe_info, bool):
            raise FileMalformed("probe_info must be a boolean when present", where)
        extra = [("precision_loss", precision_loss)]
        extra += sorted((k, v) for k, v in record.items() if k not in _CORE_KEYS)
        store.add_direct(
            Annotation(
                id=AnnotationId(resource, local_id),
                gene=gene,
                tissue=tissue,
                stage=stage,
                level=level,
                direct=True,
                probe_info=probe_info,
                technique=record.get("technique"),
                source_url=record.get("source_url"),
                extra=tuple(extra),
            )
        )
        report.loaded += 1
        report.per_resource[resource.value] = report.per_resource.get(resource.value, 0) + 1

    report.derived = store.recompute_propagation()
    return report


def ingest_file(path, store: Store) -> IngestReport:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read annotation file: {exc}", locator=str(path))
    if not isinstance(doc, list):
        raise FileMalformed("annotation file must be a list of records", locator=str(path))
    return ingest_records(doc, store, locator=str(path))
