"""Labelling kernel with backend selection at import time.

The compiled extension is preferred; environments without it (or where the
optional build step failed) fall back to the pure-Python implementation
with identical semantics.
"""

from . import pure

IN, OUT, UNDEC = pure.IN, pure.OUT, pure.UNDEC

try:
    from . import _grounded as _backend

    BACKEND = "compiled"
except ImportError:
    _backend = pure
    BACKEND = "pure"

grounded_labels = _backend.grounded_labels

__all__ = ["IN", "OUT", "UNDEC", "BACKEND", "grounded_labels", "pure"]
