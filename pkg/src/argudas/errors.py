"""Exception hierarchy shared by all modules."""


class ArgudasError(Exception):
    """Base class for every error raised by this package."""


class BadStage(ArgudasError):
    """Theiler stage outside 1..28."""


class CycleDetected(ArgudasError):
    """Part-of edges of an anatomy document contain a cycle."""


class DanglingEdge(ArgudasError):
    """An edge references a tissue that is not declared as a node."""


class UnknownTissue(ArgudasError):
    """Tissue id not present in the anatomy graph."""


class StageMismatch(ArgudasError):
    """Annotation stage differs from the graph it is propagated against."""


class UnmappedTerm(ArgudasError):
    """No alignment entry for a resource-native anatomy term."""


class UnknownLabel(ArgudasError):
    """Expression-level label outside the resource's declared vocabulary."""


class NoThresholdOnPath(ArgudasError):
    """Neither the tissue nor any of its ancestors carries a threshold entry."""


class NegativeValue(ArgudasError):
    """Raw expression value below zero."""


class DuplicateSchemeId(ArgudasError):
    """Two schemes in one catalog share an id."""


class MalformedCondition(ArgudasError):
    """Scheme condition with unknown field/operator or wrong arity."""


class MissingScore(ArgudasError):
    """An expert has not scored every scheme in the catalog."""

    def __init__(self, scheme_ids):
        self.scheme_ids = list(scheme_ids)
        super().__init__("missing scores for schemes: " + ", ".join(self.scheme_ids))


class EmptyCatalog(ArgudasError):
    """Agreement statistics are undefined for an empty catalog."""


class NoScores(ArgudasError):
    """Confidence aggregation needs at least one expert score."""


class DisabledScheme(ArgudasError):
    """Scheme whose aggregate confidence is below the enabling threshold."""


class UnknownScheme(ArgudasError):
    """Scheme id not present in the loaded catalog."""


class FileMalformed(ArgudasError):
    """Input document does not parse against its declared shape."""

    def __init__(self, message, locator=None):
        self.locator = locator
        if locator is not None:
            message = f"{message} (at {locator})"
        super().__init__(message)
