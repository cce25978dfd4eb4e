"""Canonical vocabulary shared by every other module.

Expression claims are either ``not detected`` or an interval over the
ordered present levels weak < moderate < strong.  A bare "detected" or
"present" report is the full interval [weak, strong]: it asserts presence
while staying level-compatible with any present annotation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import BadStage

GeneId = str
TissueId = str


class PresentLevel(enum.IntEnum):
    """Ordered positive expression strengths."""

    WEAK = 1
    MODERATE = 2
    STRONG = 3

    @property
    def label(self) -> str:
        return self.name.lower()


class ResourceId(enum.Enum):
    EMAGE = "EMAGE"
    GXD = "GXD"
    ABA = "ABA"
    GENSAT = "GENSAT"

    @classmethod
    def parse(cls, text: str) -> "ResourceId":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown resource {text!r}") from None


class TheilerStage(int):
    """Developmental time window, 1..28 (27 = newborn, 28 = adult)."""

    MIN, MAX = 1, 28

    def __new__(cls, value) -> "TheilerStage":
        iv = int(value)
        if iv != float(value) or not cls.MIN <= iv <= cls.MAX:
            raise BadStage(f"Theiler stage must be an integer in 1..28, got {value!r}")
        return super().__new__(cls, iv)

    @property
    def is_developmental(self) -> bool:
        return self <= 26

    @property
    def is_newborn(self) -> bool:
        return self == 27

    @property
    def is_adult(self) -> bool:
        return self == 28


@dataclass(frozen=True, order=True)
class ExpressionRange:
    """Either not-detected or a closed interval [lo, hi] of present levels.

    The not-detected value carries no interval; ``lo``/``hi`` are both None.
    """

    lo: Optional[PresentLevel]
    hi: Optional[PresentLevel]

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise ValueError("lo and hi must both be set or both be None")
        if self.lo is not None and self.lo > self.hi:
            raise ValueError(f"interval lower bound {self.lo} above upper bound {self.hi}")

    @classmethod
    def not_detected(cls) -> "ExpressionRange":
        return NOT_DETECTED

    @classmethod
    def exactly(cls, level: PresentLevel) -> "ExpressionRange":
        return cls(level, level)

    @classmethod
    def between(cls, lo: PresentLevel, hi: PresentLevel) -> "ExpressionRange":
        return cls(lo, hi)

    @classmethod
    def detected(cls) -> "ExpressionRange":
        """Presence asserted without a stated level."""
        return cls(PresentLevel.WEAK, PresentLevel.STRONG)

    @property
    def is_present(self) -> bool:
        return self.lo is not None

    def overlaps(self, other: "ExpressionRange") -> bool:
        if not (self.is_present and other.is_present):
            return False
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def label(self) -> str:
        if not self.is_present:
            return "not detected"
        if self.lo == self.hi:
            return self.lo.label
        if self.lo == PresentLevel.WEAK and self.hi == PresentLevel.STRONG:
            return "detected"
        return f"{self.lo.label} to {self.hi.label}"

    @classmethod
    def from_label(cls, label: str) -> "ExpressionRange":
        try:
            return _RANGE_BY_LABEL[label.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown expression-range label {label!r}") from None


NOT_DETECTED = ExpressionRange(None, None)

#: The seven distinct values an ExpressionRange can take.
ALL_RANGES = tuple(
    [NOT_DETECTED]
    + [
        ExpressionRange(PresentLevel(lo), PresentLevel(hi))
        for lo in (1, 2, 3)
        for hi in (1, 2, 3)
        if lo <= hi
    ]
)

_RANGE_BY_LABEL = {r.label: r for r in ALL_RANGES}


class AnnotationId(NamedTuple):
    resource: ResourceId
    local: str

    def __str__(self) -> str:
        return f"{self.resource.value}:{self.local}"

    @classmethod
    def parse(cls, text: str) -> "AnnotationId":
        resource, _, local = text.partition(":")
        if not local:
            raise ValueError(f"annotation id must look like RESOURCE:local, got {text!r}")
        return cls(ResourceId.parse(resource), local)


@dataclass(frozen=True)
class Annotation:
    """One resource assertion: gene x tissue x stage x expression level.

    ``direct`` is False for annotations derived by upward propagation; such
    annotations always name their origin in ``derived_from`` and always carry
    a present interval (absence is never propagated).
    """

    id: AnnotationId
    gene: GeneId
    tissue: TissueId
    stage: TheilerStage
    level: ExpressionRange
    direct: bool = True
    probe_info: Optional[bool] = None
    technique: Optional[str] = None
    source_url: Optional[str] = None
    derived_from: Optional[AnnotationId] = None
    extra: tuple = field(default_factory=tuple)  # opaque (key, value) pairs

    def __post_init__(self):
        if not self.gene:
            raise ValueError("gene id must be nonempty")
        if not self.tissue:
            raise ValueError("tissue id must be nonempty")
        if not isinstance(self.stage, TheilerStage):
            object.__setattr__(self, "stage", TheilerStage(self.stage))
        if not self.direct:
            if self.derived_from is None:
                raise ValueError("propagated annotation must name its origin")
            if not self.level.is_present:
                raise ValueError("propagated annotation must carry a present interval")

    @property
    def subject(self) -> tuple:
        return (self.gene, self.tissue, self.stage)

    def extra_value(self, key: str):
        for k, v in self.extra:
            if k == key:
                return v
        return None


class Mode(enum.Enum):
    """Granularity at which two expression claims are compared."""

    PRESENCE = "presence"
    LEVEL = "level"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"mode must be 'presence' or 'level', got {text!r}") from None


@dataclass(frozen=True)
class InterpretationProfile:
    mode: Mode = Mode.PRESENCE
    prefer_direct: bool = False


@dataclass(frozen=True)
class Query:
    """Filter over the store; at least one of gene/tissue must be set."""

    gene: Optional[GeneId] = None
    tissue: Optional[TissueId] = None
    stage: Optional[TheilerStage] = None
    profile: InterpretationProfile = InterpretationProfile()

    def __post_init__(self):
        if self.gene is None and self.tissue is None:
            raise ValueError("query needs at least one of gene or tissue")
        if self.stage is not None and not isinstance(self.stage, TheilerStage):
            object.__setattr__(self, "stage", TheilerStage(self.stage))

    def matches_subject(self, gene: GeneId, tissue: TissueId, stage: TheilerStage) -> bool:
        if self.gene is not None and gene != self.gene:
            return False
        if self.tissue is not None and tissue != self.tissue:
            return False
        if self.stage is not None and stage != self.stage:
            return False
        return True


def presence(r: ExpressionRange) -> bool:
    """True iff the range asserts expression; absent and expressed are exclusive."""
    return r.is_present


def compatible(r1: ExpressionRange, r2: ExpressionRange, mode: Mode) -> bool:
    """Whether two expression claims agree at the requested granularity.

    Presence mode only asks expressed-or-not; level mode additionally
    requires the present intervals to overlap.
    """
    if mode is Mode.PRESENCE:
        return presence(r1) == presence(r2)
    if not presence(r1) and not presence(r2):
        return True
    return r1.overlaps(r2)
