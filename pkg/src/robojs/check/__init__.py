"""Static checks and the source-to-source instrumenter."""

from .instrument import (
    MARKER,
    AlreadyInstrumented,
    NotStaticallyClean,
    instrument,
    is_instrumented,
)
from .statics import ArityTable, build_arity_table, static_check

__all__ = [
    "static_check",
    "instrument",
    "is_instrumented",
    "build_arity_table",
    "ArityTable",
    "MARKER",
    "AlreadyInstrumented",
    "NotStaticallyClean",
]
