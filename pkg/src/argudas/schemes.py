"""Argumentation schemes: expert-scored defeasible inference patterns.

A scheme is a natural-language if-then statement over annotation fields,
stored with the critical questions a reader should ask before applying it
and with a confidence score per expert.  Enabled schemes compile to small
executable rules; the condition language is a conjunction of equality and
presence tests, plus a handful of two-annotation predicates for patterns
such as independent agreement across resources.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    DisabledScheme,
    DuplicateSchemeId,
    EmptyCatalog,
    FileMalformed,
    MalformedCondition,
    MissingScore,
    NoScores,
)
from .model import Annotation, presence


class ExpertScore(enum.Enum):
    """Five-point confidence scale; "?" sits between rejection and a weak scheme."""

    ZERO = ("0", 0)
    UNSURE = ("?", 1)
    ONE = ("1", 2)
    TWO = ("2", 3)
    THREE = ("3", 4)

    def __init__(self, symbol: str, ordinal: int):
        self.symbol = symbol
        self.ordinal = ordinal

    @classmethod
    def from_symbol(cls, symbol: str) -> "ExpertScore":
        for member in cls:
            if member.symbol == symbol:
                return member
        raise ValueError(f"expert score must be one of 0 ? 1 2 3, got {symbol!r}")


class AgreementClass(enum.Enum):
    EXACT = "exact"
    SIMILAR = "similar"
    DISAGREE = "disagree"


class Polarity(enum.Enum):
    SUPPORTS_EXPRESSION = "supports_expression"
    OPPOSES_EXPRESSION = "opposes_expression"
    STRENGTHENS_ANNOTATION = "strengthens_annotation"
    WEAKENS_ANNOTATION = "weakens_annotation"

    @property
    def about_annotation_trust(self) -> bool:
        return self in (Polarity.STRENGTHENS_ANNOTATION, Polarity.WEAKENS_ANNOTATION)


class Operator(enum.Enum):
    EQUALS = "equals"
    NOT_EQUALS = "not_equals"
    IS_SET = "is_set"
    IS_ABSENT = "is_absent"
    PRESENCE_IS = "presence_is"


_ANNOTATION_FIELDS = (
    "level",
    "direct",
    "probe_info",
    "technique",
    "source_url",
    "resource",
    "gene",
    "tissue",
    "stage",
    "derived_from",
    "precision_loss",
)

_PAIR_FIELDS = (
    "pair.same_subject",
    "pair.distinct_resources",
    "pair.presence_agrees",
    "pair.levels_overlap",
)

_VALUELESS_OPS = (Operator.IS_SET, Operator.IS_ABSENT)


@dataclass(frozen=True)
class Condition:
    """One conjunct: a field test against an optional literal."""

    field: str
    op: Operator
    value: object = None

    def __post_init__(self):
        if self.op in _VALUELESS_OPS:
            if self.value is not None:
                raise MalformedCondition(f"operator {self.op.value} takes no value")
        elif self.value is None:
            raise MalformedCondition(f"operator {self.op.value} needs a value")
        if self.field in _PAIR_FIELDS:
            if self.op is not Operator.EQUALS or not isinstance(self.value, bool):
                raise MalformedCondition(
                    f"pair predicate {self.field} only supports equals true/false"
                )
        elif self.field not in _ANNOTATION_FIELDS:
            raise MalformedCondition(f"unknown condition field {self.field!r}")
        if self.op is Operator.PRESENCE_IS:
            if self.field != "level" or not isinstance(self.value, bool):
                raise MalformedCondition("presence_is applies to 'level' with a boolean value")

    @property
    def is_pair_predicate(self) -> bool:
        return self.field in _PAIR_FIELDS


def _extract(annotation: Annotation, field_name: str):
    if field_name == "level":
        return annotation.level
    if field_name == "resource":
        return annotation.id.resource.value
    if field_name == "stage":
        return int(annotation.stage)
    if field_name == "derived_from":
        return None if annotation.derived_from is None else str(annotation.derived_from)
    if field_name == "precision_loss":
        return annotation.extra_value("precision_loss")
    return getattr(annotation, field_name)


def _holds_for(cond: Condition, annotation: Annotation) -> bool:
    value = _extract(annotation, cond.field)
    if cond.op is Operator.IS_SET:
        return value is not None
    if cond.op is Operator.IS_ABSENT:
        return value is None
    if cond.op is Operator.PRESENCE_IS:
        return presence(value) == cond.value
    # Comparisons need a recorded value; unrecorded optionals match nothing.
    if value is None:
        return False
    if cond.field == "level":
        value = value.label
    if cond.op is Operator.EQUALS:
        return value == cond.value
    return value != cond.value


def _holds_for_pair(cond: Condition, a: Annotation, b: Annotation) -> bool:
    if cond.field == "pair.same_subject":
        result = a.subject == b.subject
    elif cond.field == "pair.distinct_resources":
        result = a.id.resource != b.id.resource
    elif cond.field == "pair.presence_agrees":
        result = presence(a.level) == presence(b.level)
    else:  # pair.levels_overlap
        result = a.level.overlaps(b.level)
    return result == cond.value


class Scope(enum.Enum):
    SINGLE = "single"
    PAIR = "pair"


@dataclass
class Scheme:
    """An expert-scored inference pattern; scores are the only mutable part."""

    id: str
    description: str
    polarity: Polarity
    conditions: Tuple[Condition, ...]
    critical_questions: Tuple[str, ...] = ()
    scores: Dict[str, ExpertScore] = field(default_factory=dict)
    scope: Scope = Scope.SINGLE

    def __post_init__(self):
        if not self.id:
            raise MalformedCondition("scheme id must be nonempty")
        if not self.conditions:
            raise MalformedCondition(f"scheme {self.id!r} has no conditions")
        if self.scope is Scope.SINGLE:
            for cond in self.conditions:
                if cond.is_pair_predicate:
                    raise MalformedCondition(
                        f"scheme {self.id!r} uses pair predicate {cond.field} in single scope"
                    )
        elif self.polarity.about_annotation_trust:
            raise MalformedCondition(
                f"scheme {self.id!r}: trust polarities apply to single annotations only"
            )

    @property
    def label(self) -> str:
        """Short display label: the description's leading clause."""
        head = self.description.split(".")[0].split(":")[0].strip()
        return head if len(head) <= 60 else head[:57] + "..."


class Confidence(NamedTuple):
    ordinal: int
    enabled: bool


def aggregate_confidence(scores: Mapping[str, ExpertScore]) -> Confidence:
    """Arithmetic mean of expert ordinals, rounded half-up; enabled from "weak" up."""
    if not scores:
        raise NoScores("cannot aggregate an empty score map")
    total = sum(s.ordinal for s in scores.values())
    n = len(scores)
    ordinal = (2 * total + n) // (2 * n)
    return Confidence(ordinal, ordinal >= 2)


def classify_agreement(s1: ExpertScore, s2: ExpertScore) -> AgreementClass:
    """Exact on equal scores, similar on adjacent ones, disagree otherwise."""
    gap = abs(s1.ordinal - s2.ordinal)
    if gap == 0:
        return AgreementClass.EXACT
    if gap == 1:
        return AgreementClass.SIMILAR
    return AgreementClass.DISAGREE


class AgreementReport(NamedTuple):
    exact: int
    similar: int
    disagree: int
    broad_agreement: float


def agreement_report(
    catalog: Sequence[Scheme], expert_a: str, expert_b: str
) -> AgreementReport:
    """Per-class counts over the catalog plus the broadly-agreed fraction."""
    if not catalog:
        raise EmptyCatalog("agreement statistics need at least one scheme")
    missing = [s.id for s in catalog if expert_a not in s.scores or expert_b not in s.scores]
    if missing:
        raise MissingScore(missing)
    counts = {cls: 0 for cls in AgreementClass}
    for scheme in catalog:
        counts[classify_agreement(scheme.scores[expert_a], scheme.scores[expert_b])] += 1
    exact, similar = counts[AgreementClass.EXACT], counts[AgreementClass.SIMILAR]
    return AgreementReport(
        exact, similar, counts[AgreementClass.DISAGREE], (exact + similar) / len(catalog)
    )


@dataclass(frozen=True)
class Rule:
    """Executable form of an enabled scheme."""

    scheme_id: str
    label: str
    polarity: Polarity
    confidence: int
    conditions: Tuple[Condition, ...]
    scope: Scope = Scope.SINGLE

    def matches(self, annotation: Annotation) -> bool:
        return all(_holds_for(c, annotation) for c in self.conditions)

    def matches_pair(self, a: Annotation, b: Annotation) -> bool:
        for cond in self.conditions:
            if cond.is_pair_predicate:
                if not _holds_for_pair(cond, a, b):
                    return False
            elif not (_holds_for(cond, a) and _holds_for(cond, b)):
                return False
        return True


def compile_scheme(scheme: Scheme) -> Rule:
    """Compile an enabled scheme; disabled schemes are a caller error."""
    confidence = aggregate_confidence(scheme.scores)
    if not confidence.enabled:
        raise DisabledScheme(f"scheme {scheme.id!r} has aggregate confidence {confidence.ordinal}")
    return Rule(
        scheme_id=scheme.id,
        label=scheme.label,
        polarity=scheme.polarity,
        confidence=confidence.ordinal,
        conditions=scheme.conditions,
        scope=scheme.scope,
    )


def compile_enabled(catalog: Sequence[Scheme]) -> List[Rule]:
    """Rules for every scheme whose aggregate confidence enables it."""
    rules = []
    for scheme in catalog:
        if scheme.scores and aggregate_confidence(scheme.scores).enabled:
            rules.append(compile_scheme(scheme))
    return rules


def parse_scheme_catalog(doc, locator="<memory>") -> List[Scheme]:
    """Parse and validate a catalog document (a JSON list of scheme objects)."""
    if not isinstance(doc, list):
        raise FileMalformed("scheme catalog must be a list", locator)
    catalog: List[Scheme] = []
    seen = set()
    for i, rec in enumerate(doc):
        where = f"{locator} scheme {i}"
        if not isinstance(rec, dict):
            raise FileMalformed("scheme entry must be an object", where)
        try:
            scheme_id = rec["id"]
            description = rec["description"]
            polarity = Polarity(rec["polarity"])
            scope = Scope(rec.get("scope", "single"))
            conditions = tuple(
                Condition(
                    field=c["field"],
                    op=Operator(c["op"]),
                    value=c.get("value"),
                )
                for c in rec["conditions"]
            )
            questions = tuple(rec.get("critical_questions", ()))
            scores = {
                expert: ExpertScore.from_symbol(symbol)
                for expert, symbol in rec.get("scores", {}).items()
            }
        except MalformedCondition:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise FileMalformed(f"bad scheme entry: {exc}", where)
        if scheme_id in seen:
            raise DuplicateSchemeId(f"scheme id {scheme_id!r} appears twice")
        seen.add(scheme_id)
        catalog.append(
            Scheme(
                id=scheme_id,
                description=description,
                polarity=polarity,
                conditions=conditions,
                critical_questions=questions,
                scores=scores,
                scope=scope,
            )
        )
    return catalog


def load_scheme_catalog(path) -> List[Scheme]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileMalformed(f"cannot read scheme catalog: {exc}", locator=str(path))
    return parse_scheme_catalog(doc, locator=str(path))


def catalog_to_records(catalog: Sequence[Scheme]) -> List[dict]:
    """Inverse of parse_scheme_catalog, used by snapshots."""
    records = []
    for s in catalog:
        conditions = []
        for c in s.conditions:
            entry = {"field": c.field, "op": c.op.value}
            if c.value is not None:
                entry["value"] = c.value
            conditions.append(entry)
        records.append(
            {
                "id": s.id,
                "description": s.description,
                "polarity": s.polarity.value,
                "scope": s.scope.value,
                "conditions": conditions,
                "critical_questions": list(s.critical_questions),
                "scores": {expert: score.symbol for expert, score in sorted(s.scores.items())},
            }
        )
    return records
