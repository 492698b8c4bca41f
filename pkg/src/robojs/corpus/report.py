"""Per-account statistics and error estimates over a revision corpus.

Two independent passes over the same revisions:

* ``scan`` counts volume — source lines (L), revisions (R), and files (F)
  per account, with the derived ratios L/R and R/F.  Totals are column
  sums and the totals-row ratios are recomputed from those sums, not
  averaged over accounts.
* ``estimate_errors`` runs the conservative rules of :mod:`.rules` on
  every revision and counts, per account, the revisions that fail to
  parse and the revisions the runtime checks would certainly stop.  A
  revision counts at most once per column; a revision with findings in k
  categories increments k per-category counters but the per-account
  error column once.

``report`` renders both as a table or as CSV: one row per account, a
totals row, and the two headline percentages (share of revisions with
syntax errors, share with check-catching mistakes — both over all
revisions).
"""

from __future__ import annotations

import io
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..diagnostics import CheckCategory
from .rules import ApiView, RevisionAnalysis, analyze_source
from .scanner import Revision, scan_corpus

CATEGORY_ORDER = tuple(category.value for category in CheckCategory)


def _revisions(corpus) -> list[Revision]:
    """Normalize a corpus argument: a root directory or a revision list."""
    if isinstance(corpus, (str, Path)):
        return scan_corpus(corpus)
    return list(corpus)


# ----------------------------------------------------------------------
# volume statistics


@dataclass
class AccountStats:
    account: str
    lines: int = 0
    revisions: int = 0
    files: int = 0

    @property
    def lines_per_revision(self) -> float | None:
        return self.lines / self.revisions if self.revisions else None

    @property
    def revisions_per_file(self) -> float | None:
        return self.revisions / self.files if self.files else None


@dataclass
class CorpusStats:
    per_account: list[AccountStats]
    totals: AccountStats

    def to_dict(self) -> dict:
        def row(s: AccountStats) -> dict:
            return {"lines": s.lines, "revisions": s.revisions, "files": s.files}

        return {
            "per_account": {s.account: row(s) for s in self.per_account},
            "totals": row(self.totals),
        }


def scan(corpus) -> CorpusStats:
    """Count lines, revisions, and files per account, plus a totals row."""
    accounts: dict[str, AccountStats] = {}
    files: set[tuple[str, str]] = set()
    for rev in _revisions(corpus):
        stats = accounts.setdefault(rev.account, AccountStats(rev.account))
        stats.lines += len(rev.source.splitlines())
        stats.revisions += 1
        if (rev.account, rev.file) not in files:
            files.add((rev.account, rev.file))
            stats.files += 1
    per_account = [accounts[name] for name in sorted(accounts)]
    totals = AccountStats(
        "total",
        lines=sum(s.lines for s in per_account),
        revisions=sum(s.revisions for s in per_account),
        files=sum(s.files for s in per_account),
    )
    return CorpusStats(per_account, totals)


# ----------------------------------------------------------------------
# error estimation


@dataclass
class AccountErrors:
    account: str
    revisions: int = 0
    syntax_error_revisions: int = 0
    check_error_revisions: int = 0


@dataclass
class RevisionResult:
    revision: Revision
    analysis: RevisionAnalysis


@dataclass
class ErrorEstimate:
    per_account: list[AccountErrors]
    totals: AccountErrors
    # revisions with at least one finding in the category (each revision
    # counted once per category, however many sites it hits)
    category_revisions: dict[str, int] = field(default_factory=dict)
    clean_revisions: int = 0
    results: list[RevisionResult] = field(default_factory=list)

    @property
    def syntax_fraction(self) -> float | None:
        t = self.totals
        return t.syntax_error_revisions / t.revisions if t.revisions else None

    @property
    def check_fraction(self) -> float | None:
        t = self.totals
        return t.check_error_revisions / t.revisions if t.revisions else None

    def to_dict(self) -> dict:
        def row(e: AccountErrors) -> dict:
            return {
                "revisions": e.revisions,
                "syntax_error_revisions": e.syntax_error_revisions,
                "check_error_revisions": e.check_error_revisions,
            }

        return {
            "per_account": {e.account: row(e) for e in self.per_account},
            "totals": row(self.totals),
            "category_revisions": {
                category: self.category_revisions.get(category, 0)
                for category in CATEGORY_ORDER
            },
            "clean_revisions": self.clean_revisions,
        }


def estimate_errors(corpus, manifest: ApiView | Mapping | None = None) -> ErrorEstimate:
    """Run the conservative rules over every revision and tally the results.

    ``manifest`` may be an :class:`ApiView`, a parsed manifest document
    (the JSON printed by ``robojs manifest``), or ``None`` for the builtin
    catalog.
    """
    if manifest is None:
        api = None
    elif isinstance(manifest, ApiView):
        api = manifest
    else:
        api = ApiView.from_manifest(manifest)

    accounts: dict[str, AccountErrors] = {}
    estimate = ErrorEstimate(per_account=[], totals=AccountErrors("total"))
    for rev in _revisions(corpus):
        errors = accounts.setdefault(rev.account, AccountErrors(rev.account))
        errors.revisions += 1
        analysis = analyze_source(rev.source, file_id=rev.label, api=api)
        estimate.results.append(RevisionResult(rev, analysis))
        if analysis.syntax_error:
            errors.syntax_error_revisions += 1
            continue
        categories = analysis.categories
        if categories:
            errors.check_error_revisions += 1
        else:
            estimate.clean_revisions += 1
        for category in categories:
            estimate.category_revisions[category] = (
                estimate.category_revisions.get(category, 0) + 1
            )
    estimate.per_account = [accounts[name] for name in sorted(accounts)]
    totals = estimate.totals
    for errors in estimate.per_account:
        totals.revisions += errors.revisions
        totals.syntax_error_revisions += errors.syntax_error_revisions
        totals.check_error_revisions += errors.check_error_revisions
    return estimate


def analyze_corpus(
    corpus, manifest: ApiView | Mapping | None = None
) -> tuple[CorpusStats, ErrorEstimate]:
    """Load the corpus once and run both passes over it."""
    revisions = _revisions(corpus)
    return scan(revisions), estimate_errors(revisions, manifest)


# ----------------------------------------------------------------------
# rendering


def _ratio(value: float | None, places: int = 1) -> str:
    return "—" if value is None else f"{value:.{places}f}"


def _pct(value: float | None) -> str:
    return "—" if value is None else f"{100.0 * value:.1f}%"


def report(stats: CorpusStats, estimate: ErrorEstimate, format: str = "table") -> str:
    if format == "table":
        return _report_table(stats, estimate)
    if format == "csv":
        return _report_csv(stats, estimate)
    raise ValueError(f"unknown report format {format!r} (use table or csv)")


def _error_rows(estimate: ErrorEstimate) -> dict[str, AccountErrors]:
    return {e.account: e for e in estimate.per_account}


def _report_table(stats: CorpusStats, estimate: ErrorEstimate) -> str:
    errors = _error_rows(estimate)
    header = (
        f"{'account':12}{'lines':>9}{'revisions':>11}{'files':>7}"
        f"{'L/R':>8}{'R/F':>7}{'syntax':>8}{'checks':>8}"
    )
    rule = "-" * len(header)
    out = [header, rule]

    def line(s: AccountStats, e: AccountErrors | None) -> str:
        return (
            f"{s.account:12}{s.lines:>9}{s.revisions:>11}{s.files:>7}"
            f"{_ratio(s.lines_per_revision):>8}{_ratio(s.revisions_per_file):>7}"
            f"{(e.syntax_error_revisions if e else 0):>8}"
            f"{(e.check_error_revisions if e else 0):>8}"
        )

    for s in stats.per_account:
        out.append(line(s, errors.get(s.account)))
    out.append(rule)
    out.append(line(stats.totals, estimate.totals))
    out.append("")
    out.append(
        "revisions with syntax errors:   "
        f"{estimate.totals.syntax_error_revisions}/{estimate.totals.revisions} "
        f"({_pct(estimate.syntax_fraction)})"
    )
    out.append(
        "revisions the checks would stop: "
        f"{estimate.totals.check_error_revisions}/{estimate.totals.revisions} "
        f"({_pct(estimate.check_fraction)})"
    )
    out.append("")
    out.append(f"{'check':34}{'revisions':>10}{'% of revisions':>16}")
    out.append("-" * 60)
    total_revisions = estimate.totals.revisions
    ranked = sorted(
        ((estimate.category_revisions.get(c, 0), c) for c in CATEGORY_ORDER),
        key=lambda item: (-item[0], item[1]),
    )
    for count, category in ranked:
        share = _pct(count / total_revisions if total_revisions else None)
        out.append(f"{category:34}{count:>10}{share:>16}")
    return "\n".join(out) + "\n"


def _report_csv(stats: CorpusStats, estimate: ErrorEstimate) -> str:
    errors = _error_rows(estimate)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "account",
            "lines",
            "revisions",
            "files",
            "lines_per_revision",
            "revisions_per_file",
            "syntax_error_revisions",
            "check_error_revisions",
            "syntax_pct",
            "check_pct",
        ]
    )

    def row(s: AccountStats, e: AccountErrors | None) -> list:
        revisions = s.revisions
        syntax = e.syntax_error_revisions if e else 0
        checks = e.check_error_revisions if e else 0
        return [
            s.account,
            s.lines,
            s.revisions,
            s.files,
            "" if s.lines_per_revision is None else f"{s.lines_per_revision:.2f}",
            "" if s.revisions_per_file is None else f"{s.revisions_per_file:.2f}",
            syntax,
            checks,
            "" if not revisions else f"{100.0 * syntax / revisions:.1f}",
            "" if not revisions else f"{100.0 * checks / revisions:.1f}",
        ]

    for s in stats.per_account:
        writer.writerow(row(s, errors.get(s.account)))
    writer.writerow(row(stats.totals, estimate.totals))
    return buf.getvalue()


def render_details(estimate: ErrorEstimate) -> str:
    lines = []
    for result in estimate.results:
        if result.analysis.syntax_error:
            lines.append(f"{result.revision.label}: syntax error")
            continue
        for finding in result.analysis.findings:
            span = finding.span
            lines.append(
                f"{result.revision.label}:{span.start_line}:{span.start_col}: "
                f"{finding.category}: {finding.detail}"
            )
    return "\n".join(lines) + ("\n" if lines else "")


def corpus_dict(stats: CorpusStats, estimate: ErrorEstimate) -> dict:
    return {"stats": stats.to_dict(), "errors": estimate.to_dict()}


def corpus_json(stats: CorpusStats, estimate: ErrorEstimate) -> str:
    return json.dumps(corpus_dict(stats, estimate), indent=2) + "\n"
