"""Argument generation, attacks, grounded evaluation, and attribute reports.

Arguments are instantiated rules grounded in annotations.  The primary
output is the two-layer tick/cross attribute report: per expression-level
group first, then per annotation, leaving the final judgement to the
reader.  Grounded (undefeated/defeated) evaluation of the attack graph is
retained as an explicitly legacy mode.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from . import _kernel
from .model import (
    Annotation,
    AnnotationId,
    ExpressionRange,
    InterpretationProfile,
    Mode,
    NOT_DETECTED,
    Query,
    compatible,
)
from .schemes import Polarity, Rule, Scope


class ClaimKind(enum.Enum):
    EXPRESSED = "expressed"
    NOT_EXPRESSED = "not_expressed"
    ANNOTATION_TRUSTWORTHY = "annotation_trustworthy"
    ANNOTATION_SUSPECT = "annotation_suspect"


@dataclass(frozen=True)
class Claim:
    subject: tuple  # (gene, tissue, stage)
    kind: ClaimKind
    level: Optional[ExpressionRange] = None
    annotation: Optional[AnnotationId] = None

    def __post_init__(self):
        if self.kind is ClaimKind.EXPRESSED:
            if self.level is None or not self.level.is_present:
                raise ValueError("an expressed claim carries a present interval")
        elif self.level is not None:
            raise ValueError(f"{self.kind.value} claim carries no interval")
        if self.kind in (ClaimKind.ANNOTATION_TRUSTWORTHY, ClaimKind.ANNOTATION_SUSPECT):
            if self.annotation is None:
                raise ValueError("trust claims name an annotation")

    @property
    def expression_range(self) -> Optional[ExpressionRange]:
        """The range this claim asserts, if it is about expression at all."""
        if self.kind is ClaimKind.EXPRESSED:
            return self.level
        if self.kind is ClaimKind.NOT_EXPRESSED:
            return NOT_DETECTED
        return None


@dataclass(frozen=True)
class Argument:
    id: int
    rule_id: str
    grounding: Tuple[AnnotationId, ...]
    claim: Claim
    confidence: int
    any_direct: bool  # at least one grounding annotation is a direct observation

    def __post_init__(self):
        if not self.grounding:
            raise ValueError("argument grounding must be nonempty")

    @property
    def propagated_only(self) -> bool:
        return not self.any_direct


@dataclass(frozen=True)
class AttackGraph:
    arguments: Tuple[Argument, ...]
    attacks: frozenset  # of (attacker id, target id)

    def __post_init__(self):
        ids = {a.id for a in self.arguments}
        for attacker, target in self.attacks:
            if attacker == target:
                raise ValueError("self-attacks are not allowed")
            if attacker not in ids or target not in ids:
                raise ValueError("attack endpoint is not a known argument")


class Label(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNDEC = "UNDEC"


def _claim_for(rule: Rule, annotations: Sequence[Annotation]) -> Optional[Claim]:
    first = annotations[0]
    if rule.polarity is Polarity.SUPPORTS_EXPRESSION:
        if any(not a.level.is_present for a in annotations):
            return None
        lo = min(a.level.lo for a in annotations)
        hi = max(a.level.hi for a in annotations)
        return Claim(first.subject, ClaimKind.EXPRESSED, level=ExpressionRange(lo, hi))
    if rule.polarity is Polarity.OPPOSES_EXPRESSION:
        if any(a.level.is_present for a in annotations):
            return None
        return Claim(first.subject, ClaimKind.NOT_EXPRESSED)
    if rule.polarity is Polarity.STRENGTHENS_ANNOTATION:
        return Claim(first.subject, ClaimKind.ANNOTATION_TRUSTWORTHY, annotation=first.id)
    return Claim(first.subject, ClaimKind.ANNOTATION_SUSPECT, annotation=first.id)


def generate_arguments(
    query: Query, annotations: Sequence[Annotation], rules: Sequence[Rule]
) -> List[Argument]:
    """One argument per (rule, matching annotation tuple) within the query scope.

    Ids are assigned by (rule id, grounding ids) sort order, so the result
    is independent of input ordering.  Pair-scoped rules range over
    unordered pairs sharing a subject; a rule whose polarity cannot yield a
    well-formed claim for a tuple (e.g. expression support grounded on an
    absence) contributes nothing for that tuple.
    """
    in_scope = [a for a in annotations if query.matches_subject(*a.subject)]
    by_subject: Dict[tuple, List[Annotation]] = defaultdict(list)
    for a in in_scope:
        by_subject[a.subject].append(a)

    found: List[Tuple[tuple, Rule, Tuple[Annotation, ...]]] = []
    for rule in rules:
        if rule.scope is Scope.SINGLE:
            for a in in_scope:
                if rule.matches(a):
                    found.append(((rule.scheme_id, (str(a.id),)), rule, (a,)))
        else:
            for members in by_subject.values():
                ordered = sorted(members, key=lambda a: str(a.id))
                for i in range(len(ordered)):
                    for j in range(i + 1, len(ordered)):
                        a, b = ordered[i], ordered[j]
                        if rule.matches_pair(a, b):
                            found.append(
                                ((rule.scheme_id, (str(a.id), str(b.id))), rule, (a, b))
                            )

    found.sort(key=lambda item: item[0])
    arguments: List[Argument] = []
    next_id = 1
    for _, rule, grounding in found:
        claim = _claim_for(rule, grounding)
        if claim is None:
            continue
        arguments.append(
            Argument(
                id=next_id,
                rule_id=rule.scheme_id,
                grounding=tuple(a.id for a in grounding),
                claim=claim,
                confidence=rule.confidence,
                any_direct=any(a.direct for a in grounding),
            )
        )
        next_id += 1
    return arguments


def compute_attacks(arguments: Sequence[Argument], profile: InterpretationProfile) -> AttackGraph:
    """Attack relation over the arguments.

    Rebuttals hold between same-subject expression claims that are
    incompatible at the profile's granularity; a strictly more confident
    argument attacks one-way, equals attack mutually.  With prefer_direct,
    a side with any direct grounding attacks a propagated-only side
    one-way regardless of confidence.  A suspicion claim about annotation
    x additionally attacks every other argument grounded solely on x.
    """
    attacks: Set[Tuple[int, int]] = set()
    by_subject: Dict[tuple, List[Argument]] = defaultdict(list)
    for arg in arguments:
        by_subject[arg.claim.subject].append(arg)

    for bucket in by_subject.values():
        for i, a in enumerate(bucket):
            for b in bucket[i + 1:]:
                ra, rb = a.claim.expression_range, b.claim.expression_range
                if ra is None or rb is None:
                    continue
                if compatible(ra, rb, profile.mode):
                    continue
                if profile.prefer_direct and a.any_direct != b.any_direct:
                    winner, loser = (a, b) if a.any_direct else (b, a)
                    attacks.add((winner.id, loser.id))
                elif a.confidence > b.confidence:
                    attacks.add((a.id, b.id))
                elif b.confidence > a.confidence:
                    attacks.add((b.id, a.id))
                else:
                    attacks.add((a.id, b.id))
                    attacks.add((b.id, a.id))
        suspicions = [a for a in bucket if a.claim.kind is ClaimKind.ANNOTATION_SUSPECT]
        for suspect in suspicions:
            target_annotation = suspect.claim.annotation
            for other in bucket:
                if other.id == suspect.id:
                    continue
                if other.grounding == (target_annotation,):
                    attacks.add((suspect.id, other.id))

    return AttackGraph(tuple(arguments), frozenset(attacks))


_LABELS = {_kernel.IN: Label.IN, _kernel.OUT: Label.OUT, _kernel.UNDEC: Label.UNDEC}


def grounded_labelling(graph: AttackGraph) -> Dict[int, Label]:
    """Least-fixpoint labelling: unattacked arguments are IN, an argument is
    IN iff all attackers are OUT, OUT iff some attacker is IN, else UNDEC."""
    order = [a.id for a in graph.arguments]
    position = {arg_id: i for i, arg_id in enumerate(order)}
    pairs = [(position[x], position[y]) for x, y in graph.attacks]
    raw = _kernel.grounded_labels(len(order), pairs)
    return {arg_id: _LABELS[raw[i]] for i, arg_id in enumerate(order)}


class Attribute(NamedTuple):
    name: str
    tick: bool


class AnnotationAttribute(NamedTuple):
    name: str
    tick: bool
    scheme_id: str


@dataclass(frozen=True)
class LevelGroup:
    gene: str
    tissue: str
    stage: int
    label: str
    level: Optional[ExpressionRange]  # None for the presence-mode groups
    annotation_ids: Tuple[str, ...]
    attributes: Tuple[Attribute, ...]


@dataclass(frozen=True)
class AttributeReport:
    groups: Tuple[LevelGroup, ...]
    annotation_layer: Mapping[str, Tuple[AnnotationAttribute, ...]]


MULTIPLE_AGREE = "multiple annotations agree"
NO_CONFLICT = "no conflicting annotation"
DIRECT_SUPPORT = "direct annotation support"


def _compatibility_groups(members: List[Annotation], mode: Mode) -> List[List[Annotation]]:
    """Greedy maximal pairwise-compatible grouping, seeded in sorted id order."""
    ordered = sorted(members, key=lambda a: str(a.id))
    groups: List[List[Annotation]] = []
    for annotation in ordered:
        placed = False
        for group in groups:
            if all(compatible(annotation.level, m.level, mode) for m in group):
                group.append(annotation)
                placed = True
                break
        if not placed:
            groups.append([annotation])
    return groups


def _group_label(group: List[Annotation], mode: Mode) -> Tuple[str, Optional[ExpressionRange]]:
    if not group[0].level.is_present:
        return "not detected", None if mode is Mode.PRESENCE else NOT_DETECTED
    if mode is Mode.PRESENCE:
        return "present", None
    lo = max(a.level.lo for a in group)
    hi = min(a.level.hi for a in group)
    level = ExpressionRange(lo, hi)  # pairwise overlap guarantees lo <= hi
    return level.label, level


def derive_attributes(
    query: Query,
    annotations: Sequence[Annotation],
    arguments: Sequence[Argument],
    labelling: Optional[Mapping[int, Label]],
    profile: InterpretationProfile,
    rules: Sequence[Rule] = (),
) -> AttributeReport:
    """The two-layer tick/cross report.

    Level layer: annotations sharing a subject are grouped by compatibility
    at the profile's granularity; each group carries exactly three
    indicators (agreement, absence of conflict, direct support).  Annotation
    layer: one indicator per enabled trust rule per annotation.  The legacy
    labelling does not influence the indicators; it is accepted so legacy
    renderers can show both side by side.
    """
    del arguments, labelling  # indicators are derived from annotations and rules alone
    in_scope = [a for a in annotations if query.matches_subject(*a.subject)]
    by_subject: Dict[tuple, List[Annotation]] = defaultdict(list)
    for a in in_scope:
        by_subject[a.subject].append(a)

    groups: List[LevelGroup] = []
    for subject in sorted(by_subject, key=lambda s: (s[0], s[1], int(s[2]))):
        members = by_subject[subject]
        for group in _compatibility_groups(members, profile.mode):
            label, level = _group_label(group, profile.mode)
            outsiders = [m for m in members if m not in group]
            conflict = any(
                not compatible(out.level, member.level, profile.mode)
                for out in outsiders
                for member in group
            )
            attributes = (
                Attribute(MULTIPLE_AGREE, len(group) >= 2),
                Attribute(NO_CONFLICT, not conflict),
                Attribute(DIRECT_SUPPORT, any(m.direct for m in group)),
            )
            groups.append(
                LevelGroup(
                    gene=subject[0],
                    tissue=subject[1],
                    stage=int(subject[2]),
                    label=label,
                    level=level,
                    annotation_ids=tuple(sorted(str(m.id) for m in group)),
                    attributes=attributes,
                )
            )

    trust_rules = [
        r for r in rules if r.scope is Scope.SINGLE and r.polarity.about_annotation_trust
    ]
    annotation_layer: Dict[str, Tuple[AnnotationAttribute, ...]] = {}
    for a in sorted(in_scope, key=lambda a: str(a.id)):
        entries = []
        for rule in trust_rules:
            matched = rule.matches(a)
            if rule.polarity is Polarity.STRENGTHENS_ANNOTATION:
                tick = matched
            else:
                tick = not matched
            entries.append(AnnotationAttribute(rule.label, tick, rule.scheme_id))
        annotation_layer[str(a.id)] = tuple(entries)

    return AttributeReport(tuple(groups), annotation_layer)


class SummaryRow(NamedTuple):
    gene: str
    tissue: str
    stage: int
    resource: str
    local_id: str
    level: str
    direct: bool
    source_url: Optional[str]


def annotation_summary(query: Query, annotations: Sequence[Annotation]) -> List[SummaryRow]:
    """One row per annotation matching the query, sorted by stage, resource, id."""
    rows = [
        SummaryRow(
            gene=a.gene,
            tissue=a.tissue,
            stage=int(a.stage),
            resource=a.id.resource.value,
            local_id=a.id.local,
            level=a.level.label,
            direct=a.direct,
            source_url=a.source_url,
        )
        for a in annotations
        if query.matches_subject(*a.subject)
    ]
    rows.sort(key=lambda r: (r.stage, r.resource, r.local_id, r.gene, r.tissue))
    return rows


@dataclass(frozen=True)
class ArgueResult:
    report: AttributeReport
    arguments: Tuple[Argument, ...]
    attacks: AttackGraph
    labelling: Dict[int, Label]


def run_argue(
    query: Query, annotations: Sequence[Annotation], rules: Sequence[Rule]
) -> ArgueResult:
    """Full pipeline: generate, attack, label, and derive the report."""
    arguments = generate_arguments(query, annotations, rules)
    graph = compute_attacks(arguments, query.profile)
    labelling = grounded_labelling(graph)
    report = derive_attributes(query, annotations, arguments, labelling, query.profile, rules)
    return ArgueResult(report, tuple(arguments), graph, labelling)
