"""Revision-corpus analysis: volume statistics and conservative error estimates."""

from .report import (
    CATEGORY_ORDER,
    AccountErrors,
    AccountStats,
    CorpusStats,
    ErrorEstimate,
    RevisionResult,
    analyze_corpus,
    corpus_dict,
    corpus_json,
    estimate_errors,
    render_details,
    report,
    scan,
)
from .rules import ApiView, Finding, RevisionAnalysis, analyze_program, analyze_source
from .scanner import Revision, scan_corpus
from .synth import GroundTruth, synthesize_corpus

__all__ = [
    "AccountErrors",
    "AccountStats",
    "ApiView",
    "CATEGORY_ORDER",
    "CorpusStats",
    "ErrorEstimate",
    "Finding",
    "GroundTruth",
    "Revision",
    "RevisionAnalysis",
    "RevisionResult",
    "analyze_corpus",
    "analyze_program",
    "analyze_source",
    "corpus_dict",
    "corpus_json",
    "estimate_errors",
    "render_details",
    "report",
    "scan",
    "scan_corpus",
    "synthesize_corpus",
]
