"""Builds synthetic revision corpora with known defect counts.

Each generated revision is clean filler code plus zero or more planted
defect snippets, one per check category.  What was planted where is
recorded exactly — per-account volume (lines, revisions, files) and
per-account/per-category error counts — so an analyzer run over the
generated tree must reproduce the recorded numbers.  The generator is
the ground truth, not the rules.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..diagnostics import CheckCategory

_PLANTS: dict[str, str] = {
    CheckCategory.LOOSE_COMPARISON.value: (
        "let eq{n} = 1;\nif (eq{n} == 1) {{ console.log(\"one\"); }}"
    ),
    CheckCategory.ARITY_MISMATCH.value: "robot.moveToXY(0.5);",
    CheckCategory.UNINITIALIZED_VARIABLE.value: (
        "let un{n};\nconsole.log(un{n} + 1);"
    ),
    CheckCategory.CONDITIONAL_ASSIGNMENT.value: (
        "let ca{n} = 0;\nif (ca{n} = 5) {{ console.log(\"set\"); }}"
    ),
    CheckCategory.OP_TYPE_MISMATCH.value: "let om{n} = 3 * \"px\";",
    CheckCategory.MISSING_MEMBER.value: "robot.speedUp();",
    CheckCategory.NON_BOOLEAN_CONDITION.value: (
        "if (3) {{ console.log(\"always\"); }}"
    ),
    CheckCategory.FUNCTION_COMPARED_AS_VALUE.value: (
        "if (robot.getPosX > 1) {{ console.log(\"far\"); }}"
    ),
}

_SYNTAX_PLANT = "let = 5;\n"

_FILLER = (
    "let t{n} = {v};",
    "t{n} = t{n} + 2;\nconsole.log(\"t\", t{n});",
    "if (t{n} > 3) {{ console.log(\"big\"); }} else {{ console.log(\"small\"); }}",
    "robot.moveToXY(0.5, 0.5);",
    "function helper{n}(a, b) {{ return a + b; }}\nconsole.log(helper{n}(1, 2));",
    "let s{n} = \"a\" + \"b\";\nconsole.log(s{n});",
    "let k{n} = 0;\nwhile (k{n} < 3) {{ k{n} = k{n} + 1; }}",
    "robot.turnTo(90);",
    "let b{n} = true;\nif (b{n}) {{ console.log(\"yes\"); }}",
)


@dataclass
class _AccountTruth:
    lines: int = 0
    revisions: int = 0
    files: int = 0
    syntax_error_revisions: int = 0
    check_error_revisions: int = 0


@dataclass
class GroundTruth:
    """Exact expected analyzer output, in the analyzers' own dict shape."""

    per_account: dict[str, _AccountTruth] = field(default_factory=dict)
    clean_revisions: int = 0
    category_revisions: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        accounts = sorted(self.per_account)
        stats_rows = {
            name: {
                "lines": self.per_account[name].lines,
                "revisions": self.per_account[name].revisions,
                "files": self.per_account[name].files,
            }
            for name in accounts
        }
        error_rows = {
            name: {
                "revisions": self.per_account[name].revisions,
                "syntax_error_revisions": self.per_account[name].syntax_error_revisions,
                "check_error_revisions": self.per_account[name].check_error_revisions,
            }
            for name in accounts
        }
        return {
            "stats": {
                "per_account": stats_rows,
                "totals": {
                    key: sum(row[key] for row in stats_rows.values())
                    for key in ("lines", "revisions", "files")
                },
            },
            "errors": {
                "per_account": error_rows,
                "totals": {
                    key: sum(row[key] for row in error_rows.values())
                    for key in (
                        "revisions",
                        "syntax_error_revisions",
                        "check_error_revisions",
                    )
                },
                "category_revisions": {
                    category.value: self.category_revisions.get(category.value, 0)
                    for category in CheckCategory
                },
                "clean_revisions": self.clean_revisions,
            },
        }


def _make_revision(rng: random.Random, counter: list[int]) -> tuple[str, set[str], bool]:
    """Returns (source, planted_categories, is_syntax_error)."""

    def fresh(template: str) -> str:
        counter[0] += 1
        return template.format(n=counter[0], v=rng.randint(1, 9))

    filler_count = rng.randint(2, 5)
    chunks = [fresh(rng.choice(_FILLER)) for _ in range(filler_count)]

    if rng.random() < 0.08:
        chunks.insert(rng.randrange(len(chunks) + 1), _SYNTAX_PLANT.rstrip("\n"))
        return "\n".join(chunks) + "\n", set(), True

    defect_count = rng.choices((0, 1, 2, 3), weights=(30, 40, 20, 10))[0]
    categories = set(rng.sample(sorted(_PLANTS), k=defect_count))
    for category in sorted(categories):
        chunks.insert(
            rng.randrange(len(chunks) + 1), fresh(_PLANTS[category])
        )
    return "\n".join(chunks) + "\n", categories, False


def synthesize_corpus(
    root: str | Path,
    *,
    seed: int = 7,
    accounts: int = 6,
    truth_file: str | Path | None = None,
) -> GroundTruth:
    """Write a corpus under ``root`` and return its exact ground truth."""
    rng = random.Random(seed)
    base = Path(root)
    truth = GroundTruth()
    counter = [0]
    for account_index in range(accounts):
        account = f"a{account_index + 1:02d}"
        row = truth.per_account.setdefault(account, _AccountTruth())
        for file_index in range(rng.randint(1, 3)):
            file = f"prog{file_index + 1}"
            row.files += 1
            directory = base / account / file
            directory.mkdir(parents=True, exist_ok=True)
            for number in range(1, rng.randint(1, 4) + 1):
                source, categories, syntax_error = _make_revision(rng, counter)
                (directory / f"{number:03d}.js").write_text(source, encoding="utf-8")
                row.revisions += 1
                row.lines += len(source.splitlines())
                if syntax_error:
                    row.syntax_error_revisions += 1
                    continue
                if categories:
                    row.check_error_revisions += 1
                else:
                    truth.clean_revisions += 1
                for category in categories:
                    truth.category_revisions[category] = (
                        truth.category_revisions.get(category, 0) + 1
                    )
    if truth_file is not None:
        Path(truth_file).write_text(
            json.dumps(truth.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
    return truth
