"""In-memory store of loaded reference data and annotations.

Writers (ingest, score recording) mutate the store single-threaded;
readers work against the immutable value objects it holds.  Propagated
annotations are always recomputed from the direct ones, never persisted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import StageMismatch, UnknownScheme
from .mapping import AnatomyAlignment, ThresholdTable
from .model import Annotation, AnnotationId, Query
from .ontology import AnatomyGraph, propagate
from .schemes import ExpertScore, Rule, Scheme, compile_enabled


@dataclass
class Store:
    ontologies: Dict[int, AnatomyGraph] = field(default_factory=dict)
    alignment: AnatomyAlignment = field(default_factory=lambda: AnatomyAlignment({}))
    thresholds: ThresholdTable = field(default_factory=lambda: ThresholdTable({}))
    catalog: List[Scheme] = field(default_factory=list)
    direct: Dict[AnnotationId, Annotation] = field(default_factory=dict)
    derived: Dict[AnnotationId, Annotation] = field(default_factory=dict)
    # Records rejected at ingest, kept queryable: (record ref, reason name).
    excluded: List[Tuple[str, str]] = field(default_factory=list)

    def add_ontology(self, graph: AnatomyGraph) -> None:
        self.ontologies[int(graph.stage)] = graph

    def graph_for_stage(self, stage: int) -> AnatomyGraph:
        try:
            return self.ontologies[int(stage)]
        except KeyError:
            raise StageMismatch(f"no anatomy loaded for stage {int(stage)}") from None

    def add_direct(self, annotation: Annotation) -> None:
        self.direct[annotation.id] = annotation

    def recompute_propagation(self) -> int:
        """Rebuild all derived annotations; returns how many exist afterwards."""
        self.derived.clear()
        by_stage: Dict[int, List[Annotation]] = {}
        for annotation in self.direct.values():
            by_stage.setdefault(int(annotation.stage), []).append(annotation)
        for stage, annotations in sorted(by_stage.items()):
            graph = self.graph_for_stage(stage)
            ordered = sorted(annotations, key=lambda a: str(a.id))
            for result in propagate(ordered, graph):
                if not result.direct:
                    self.derived[result.id] = result
        return len(self.derived)

    def all_annotations(self) -> List[Annotation]:
        ordered = sorted(self.direct.values(), key=lambda a: str(a.id))
        ordered += sorted(self.derived.values(), key=lambda a: str(a.id))
        return ordered

    def annotations_matching(self, query: Query) -> List[Annotation]:
        return [a for a in self.all_annotations() if query.matches_subject(*a.subject)]

    def rules(self) -> List[Rule]:
        return compile_enabled(self.catalog)

    def scheme_by_id(self, scheme_id: str) -> Scheme:
        for scheme in self.catalog:
            if scheme.id == scheme_id:
                return scheme
        raise UnknownScheme(f"no scheme with id {scheme_id!r}")

    def record_score(self, scheme_id: str, expert: str, symbol: str) -> ExpertScore:
        scheme = self.scheme_by_id(scheme_id)
        score = ExpertScore.from_symbol(symbol)
        scheme.scores[expert] = score
        return score

    def known_tissue(self, tissue: str, stage: Optional[int] = None) -> bool:
        graphs: Iterable[AnatomyGraph]
        if stage is not None:
            graphs = [self.ontologies[stage]] if stage in self.ontologies else []
        else:
            graphs = self.ontologies.values()
        return any(tissue in g for g in graphs)
