"""Argudas: judge gene-expression claims across heterogeneous mouse atlases.

Annotations from EMAGE, GXD, ABA, and GENSAT are normalised onto one
anatomy and expression scale, propagated up the part-of hierarchy, and
summarised as a two-layer tick/cross attribute report derived from
expert-scored argumentation schemes.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .model import (
    Annotation,
    AnnotationId,
    ExpressionRange,
    InterpretationProfile,
    Mode,
    NOT_DETECTED,
    PresentLevel,
    Query,
    ResourceId,
    TheilerStage,
    compatible,
    presence,
)

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "AnnotationId",
    "ExpressionRange",
    "InterpretationProfile",
    "KERNEL_BACKEND",
    "Mode",
    "NOT_DETECTED",
    "PresentLevel",
    "Query",
    "ResourceId",
    "TheilerStage",
    "compatible",
    "presence",
    "__version__",
]
