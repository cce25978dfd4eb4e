"""Normalisation of resource-native anatomy terms and expression values.

EMAGE and GXD already use the canonical anatomy and a shared label set.
GENSAT reports natural-language signal labels; the Allen atlas (ABA)
reports raw floating-point values classified against per-tissue cut-offs
that are inherited down the part-of hierarchy when a tissue has no entry
of its own.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .errors import FileMalformed, NegativeValue, NoThresholdOnPath, UnknownLabel, UnmappedTerm
from .model import ExpressionRange, NOT_DETECTED, PresentLevel, ResourceId, TissueId
from .ontology import AnatomyGraph


class NoExperimentType:
    """Sentinel for GENSAT's "not done": no assay, not evidence of absence."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoExperiment"


NO_EXPERIMENT = NoExperimentType()


@dataclass(frozen=True)
class AnatomyAlignment:
    """Curated mapping from (resource, native term) to canonical tissue ids."""

    entries: Dict[Tuple[ResourceId, str], Tuple[TissueId, bool]]

    @classmethod
    def from_records(cls, records) -> "AnatomyAlignment":
        entries = {}
        for i, rec in enumerate(records):
            try:
                key = (ResourceId.parse(rec["resource"]), rec["source_term"])
                value = (rec["emap_tissue"], bool(rec["precision_loss"]))
            except (TypeError, KeyError, ValueError) as exc:
                raise FileMalformed(f"bad alignment entry: {exc}", locator=f"record {i}")
            if key in entries:
                raise FileMalformed(
                    f"duplicate alignment entry for {key[0].value}/{key[1]!r}",
                    locator=f"record {i}",
                )
            entries[key] = value
        return cls(entries)


def load_alignment(path) -> AnatomyAlignment:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read alignment document: {exc}", locator=str(path))
    if not isinstance(doc, list):
        raise FileMalformed("alignment document must be a list", locator=str(path))
    return AnatomyAlignment.from_records(doc)


def map_anatomy(
    align: AnatomyAlignment, resource: ResourceId, term: str
) -> Tuple[TissueId, bool]:
    """Resolve a resource-native anatomy term to (canonical tissue, precision loss).

    Exact-match lookup.  EMAGE and GXD name canonical tissues natively, so a
    missing entry for them is the identity mapping with no loss; for the
    brain atlases a missing entry is an error the caller must surface.
    """
    hit = align.entries.get((resource, term))
    if hit is not None:
        return hit
    if resource in (ResourceId.EMAGE, ResourceId.GXD):
        return term, False
    raise UnmappedTerm(f"no alignment for {resource.value} term {term!r}")


_EMAGE_GXD_LEVELS = {
    "not detected": NOT_DETECTED,
    "absent": NOT_DETECTED,
    "detected": ExpressionRange.detected(),
    "present": ExpressionRange.detected(),
    "weak": ExpressionRange.exactly(PresentLevel.WEAK),
    "moderate": ExpressionRange.exactly(PresentLevel.MODERATE),
    "strong": ExpressionRange.exactly(PresentLevel.STRONG),
}

_GENSAT_LEVELS = {
    "not done": NO_EXPERIMENT,
    "undetectable": NOT_DETECTED,
    "weak signal": ExpressionRange.exactly(PresentLevel.WEAK),
    "moderate to strong signal": ExpressionRange.between(
        PresentLevel.MODERATE, PresentLevel.STRONG
    ),
}


def map_emage_gxd_level(label: str) -> ExpressionRange:
    """Map an EMAGE/GXD level label ("absent" is GXD's word for "not detected")."""
    try:
        return _EMAGE_GXD_LEVELS[label.strip().lower()]
    except KeyError:
        raise UnknownLabel(f"unknown EMAGE/GXD level label {label!r}") from None


def map_gensat_level(label: str):
    """Map a GENSAT label; "not done" yields the NO_EXPERIMENT sentinel."""
    try:
        return _GENSAT_LEVELS[label.strip().lower()]
    except KeyError:
        raise UnknownLabel(f"unknown GENSAT level label {label!r}") from None


@dataclass(frozen=True)
class ThresholdTable:
    """Per-tissue cut-offs (t_weak < t_moderate < t_strong) for raw ABA values."""

    entries: Dict[TissueId, Tuple[float, float, float]]

    @classmethod
    def from_records(cls, records) -> "ThresholdTable":
        entries = {}
        for i, rec in enumerate(records):
            try:
                tissue = rec["tissue"]
                cuts = (float(rec["t_weak"]), float(rec["t_moderate"]), float(rec["t_strong"]))
            except (TypeError, KeyError, ValueError) as exc:
                raise FileMalformed(f"bad threshold entry: {exc}", locator=f"record {i}")
            if not (0 <= cuts[0] < cuts[1] < cuts[2]):
                raise FileMalformed(
                    f"thresholds for {tissue!r} must satisfy 0 <= weak < moderate < strong",
                    locator=f"record {i}",
                )
            if tissue in entries:
                raise FileMalformed(f"duplicate threshold entry for {tissue!r}", locator=f"record {i}")
            entries[tissue] = cuts
        return cls(entries)


def load_thresholds(path) -> ThresholdTable:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read threshold document: {exc}", locator=str(path))
    if not isinstance(doc, list):
        raise FileMalformed("threshold document must be a list", locator=str(path))
    return ThresholdTable.from_records(doc)


def resolve_thresholds(
    table: ThresholdTable, graph: AnatomyGraph, tissue: TissueId
) -> Tuple[float, float, float]:
    """Cut-offs for a tissue, inherited from the nearest threshold-bearing ancestor.

    A tissue's own entry always wins; otherwise the entry at the fewest
    part-of hops is used, ties broken by lexicographically smallest tissue id.
    """
    own = table.entries.get(tissue)
    if own is not None:
        return own
    hops = graph.hops_to_ancestors(tissue)
    candidates = [(d, t) for t, d in hops.items() if t in table.entries]
    if not candidates:
        raise NoThresholdOnPath(
            f"no threshold entry for {tissue!r} or any of its ancestors"
        )
    _, best = min(candidates)
    return table.entries[best]


def map_aba_value(
    table: ThresholdTable, graph: AnatomyGraph, tissue: TissueId, value: float
) -> ExpressionRange:
    """Classify a raw ABA expression value against the tissue's cut-offs.

    A value equal to a cut-off belongs to the band below it.
    """
    if value < 0:
        raise NegativeValue(f"raw expression value must be >= 0, got {value}")
    weak, moderate, strong = resolve_thresholds(table, graph, tissue)
    if value <= weak:
        return NOT_DETECTED
    if value <= moderate:
        return ExpressionRange.exactly(PresentLevel.WEAK)
    if value <= strong:
        return ExpressionRange.exactly(PresentLevel.MODERATE)
    return ExpressionRange.exactly(PresentLevel.STRONG)
