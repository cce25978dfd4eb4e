"""Per-stage anatomy graphs and upward propagation of positive expression.

Anatomy is a DAG of part-of edges (child part-of parent).  Positive
expression recorded in a part also holds for the whole, so present
annotations are copied to every ancestor tissue; absence is never
propagated in either direction.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Set, Tuple

from .errors import CycleDetected, DanglingEdge, FileMalformed, StageMismatch, UnknownTissue
from .model import Annotation, AnnotationId, TheilerStage, TissueId


@dataclass(frozen=True, eq=False)
class AnatomyGraph:
    """Immutable part-of DAG for one Theiler stage."""

    stage: TheilerStage
    names: Dict[TissueId, str]
    parents: Dict[TissueId, Tuple[TissueId, ...]]
    _ancestor_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(
        cls,
        stage,
        nodes: Iterable[Tuple[TissueId, str]],
        edges: Iterable[Tuple[TissueId, TissueId]],
    ) -> "AnatomyGraph":
        stage = TheilerStage(stage)
        names: Dict[TissueId, str] = {}
        for tid, name in nodes:
            if not tid:
                raise DanglingEdge("empty tissue id in node list")
            if tid in names:
                raise DanglingEdge(f"tissue {tid!r} declared twice")
            names[tid] = name
        parents: Dict[TissueId, List[TissueId]] = {tid: [] for tid in names}
        for child, parent in edges:
            if child not in names:
                raise DanglingEdge(f"edge child {child!r} is not a declared node")
            if parent not in names:
                raise DanglingEdge(f"edge parent {parent!r} is not a declared node")
            if parent not in parents[child]:
                parents[child].append(parent)
        graph = cls(stage, names, {t: tuple(ps) for t, ps in parents.items()})
        cycle = graph._find_cycle()
        if cycle:
            raise CycleDetected("part-of cycle: " + " -> ".join(cycle))
        return graph

    def _find_cycle(self):
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {t: WHITE for t in self.names}
        for root in self.names:
            if colour[root] != WHITE:
                continue
            stack = [(root, iter(self.parents[root]))]
            colour[root] = GREY
            path = [root]
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if colour[nxt] == GREY:
                        return path[path.index(nxt):] + [nxt]
                    if colour[nxt] == WHITE:
                        colour[nxt] = GREY
                        stack.append((nxt, iter(self.parents[nxt])))
                        path.append(nxt)
                        advanced = True
                        break
                if not advanced:
                    colour[node] = BLACK
                    stack.pop()
                    path.pop()
        return None

    def __contains__(self, tissue: TissueId) -> bool:
        return tissue in self.names

    def ancestors(self, tissue: TissueId) -> Set[TissueId]:
        """Tissues reachable by one or more part-of hops; never includes the query."""
        if tissue not in self.names:
            raise UnknownTissue(f"tissue {tissue!r} not in stage {int(self.stage)} anatomy")
        cached = self._ancestor_cache.get(tissue)
        if cached is not None:
            return set(cached)
        seen: Set[TissueId] = set()
        frontier = deque(self.parents[tissue])
        while frontier:
            t = frontier.popleft()
            if t in seen:
                continue
            seen.add(t)
            frontier.extend(self.parents[t])
        self._ancestor_cache[tissue] = frozenset(seen)
        return seen

    def hops_to_ancestors(self, tissue: TissueId) -> Dict[TissueId, int]:
        """Shortest part-of hop count to each ancestor (BFS upward)."""
        if tissue not in self.names:
            raise UnknownTissue(f"tissue {tissue!r} not in stage {int(self.stage)} anatomy")
        dist: Dict[TissueId, int] = {}
        frontier = deque((p, 1) for p in self.parents[tissue])
        while frontier:
            t, d = frontier.popleft()
            if t in dist:
                continue
            dist[t] = d
            frontier.extend((p, d + 1) for p in self.parents[t])
        return dist


def load_ontology(path) -> AnatomyGraph:
    """Load one stage's anatomy from its JSON document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read ontology document: {exc}", locator=str(path))
    return parse_ontology(doc, locator=str(path))


def parse_ontology(doc, locator="<memory>") -> AnatomyGraph:
    if not isinstance(doc, dict) or "stage" not in doc:
        raise FileMalformed("ontology document must be an object with a 'stage' field", locator)
    try:
        nodes = [(n["id"], n.get("name", n["id"])) for n in doc.get("nodes", [])]
        edges = [(e["child"], e["parent"]) for e in doc.get("edges", [])]
    except (TypeError, KeyError) as exc:
        raise FileMalformed(f"bad node or edge entry: {exc}", locator)
    return AnatomyGraph.build(doc["stage"], nodes, edges)


def _origin(annotation: Annotation) -> AnnotationId:
    # Propagation chains collapse to the original direct observation.
    return annotation.id if annotation.direct else annotation.derived_from


def _derived_id(origin: AnnotationId, ancestor: TissueId) -> AnnotationId:
    return AnnotationId(origin.resource, f"{origin.local}>up>{ancestor}")


def propagate(annotations: Sequence[Annotation], graph: AnatomyGraph) -> List[Annotation]:
    """Input annotations plus one derived annotation per (present input, ancestor).

    Derived annotations keep the original level and provenance fields, are
    flagged direct=False, and name their origin.  Duplicates (same gene,
    tissue, stage, level and origin) are emitted once, which also makes the
    operation idempotent.
    """
    for a in annotations:
        if a.stage != graph.stage:
            raise StageMismatch(
                f"annotation {a.id} is for stage {int(a.stage)}, graph is stage {int(graph.stage)}"
            )
        if a.tissue not in graph:
            raise UnknownTissue(f"annotation {a.id} names unknown tissue {a.tissue!r}")

    existing = {(a.gene, a.tissue, a.stage, a.level, _origin(a)) for a in annotations if not a.direct}
    derived: Dict[tuple, Annotation] = {}
    for a in annotations:
        if not a.level.is_present:
            continue
        origin = _origin(a)
        for ancestor in graph.ancestors(a.tissue):
            key = (a.gene, ancestor, a.stage, a.level, origin)
            if key in existing or key in derived:
                continue
            derived[key] = Annotation(
                id=_derived_id(origin, ancestor),
                gene=a.gene,
                tissue=ancestor,
                stage=a.stage,
                level=a.level,
                direct=False,
                probe_info=a.probe_info,
                technique=a.technique,
                source_url=a.source_url,
                derived_from=origin,
                extra=a.extra,
            )
    ordered = sorted(derived.values(), key=lambda d: (str(d.id), d.tissue))
    return list(annotations) + ordered
