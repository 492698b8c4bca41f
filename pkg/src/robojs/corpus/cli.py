"""Command line front end for the corpus analyzer (`robojs-corpus`).

Usage:

    robojs-corpus DIR [--format table|csv] [--manifest FILE]
                      [--details] [--json]
    robojs-corpus DIR --synth [--seed N] [--accounts N] [--truth FILE]

The first form analyzes the revision tree under DIR; the second writes a
synthetic corpus with known planted defects into DIR (and optionally the
exact expected counts as JSON), for exercising the analyzer.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .report import analyze_corpus, corpus_json, render_details, report
from .synth import synthesize_corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robojs-corpus",
        description="Analyze a tree of stored program revisions "
        "(account/file/NNN.js) for volume statistics and likely mistakes.",
    )
    parser.add_argument("dir", help="corpus root directory")
    parser.add_argument(
        "--format",
        choices=("table", "csv"),
        default="table",
        help="output format (default: table)",
    )
    parser.add_argument(
        "--manifest",
        metavar="FILE",
        help="JSON API manifest to read arities from "
        "(as printed by `robojs manifest`); default: builtin catalog",
    )
    parser.add_argument(
        "--details",
        action="store_true",
        help="also print one line per finding with its source position",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="print the raw counts as JSON instead of a report",
    )
    parser.add_argument(
        "--synth",
        action="store_true",
        help="write a synthetic corpus with planted defects into DIR",
    )
    parser.add_argument(
        "--seed", type=int, default=7, help="synthesis RNG seed (default: 7)"
    )
    parser.add_argument(
        "--accounts", type=int, default=6, help="synthetic account count (default: 6)"
    )
    parser.add_argument(
        "--truth",
        metavar="FILE",
        help="with --synth: also write the exact expected counts as JSON",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.synth:
        truth = synthesize_corpus(
            args.dir, seed=args.seed, accounts=args.accounts, truth_file=args.truth
        )
        totals = truth.to_dict()["stats"]["totals"]
        print(
            f"wrote {totals['revisions']} revisions "
            f"({totals['files']} files, {len(truth.per_account)} accounts) "
            f"under {args.dir}"
        )
        if args.truth:
            print(f"ground truth written to {args.truth}")
        return 0

    root = Path(args.dir)
    if not root.is_dir():
        print(f"robojs-corpus: corpus root not found: {root}", file=sys.stderr)
        return 2

    manifest = None
    if args.manifest:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))

    stats, estimate = analyze_corpus(root, manifest)
    if args.json:
        sys.stdout.write(corpus_json(stats, estimate))
    else:
        sys.stdout.write(report(stats, estimate, format=args.format))
    if args.details:
        sys.stdout.write(render_details(estimate))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
