"""The five canonical novice mistakes, exercised end to end.

Each fixture is one program. In permissive mode it runs to completion
with the silent wrong behavior a JavaScript engine would produce; in
strict mode it aborts with the matching check category at the site of
the mistake.
"""

import pytest

from robojs.diagnostics import CheckCategory
from robojs.interp import Mode, StubIoPort, run_program
from robojs.lang.parser import parse

FIXTURES = [
    # (name, source, permissive printed lines, strict category, strict line)
    (
        "loose-comparison",
        'let code = 7;\nif (code == "7") { console.log("match"); }\n'
        'console.log("after");',
        ["match", "after"],  # coercion makes 7 == "7" true
        CheckCategory.LOOSE_COMPARISON,
        2,
    ),
    (
        "uninitialized-variable",
        "let total;\ntotal = total + 5;\nconsole.log(total);",
        ["NaN"],  # undefined + 5
        CheckCategory.UNINITIALIZED_VARIABLE,
        2,
    ),
    (
        "conditional-assignment",
        "let score = 0;\nif (score = 3) { console.log(\"won\"); }\n"
        "console.log(score);",
        ["won", "3"],  # = assigns, 3 is truthy, score is clobbered
        CheckCategory.CONDITIONAL_ASSIGNMENT,
        2,
    ),
    (
        "op-type-mismatch",
        'let label = "speed: " + 5;\nconsole.log(label * 2);',
        ["NaN"],  # "speed: 5" * 2
        CheckCategory.OP_TYPE_MISMATCH,
        1,
    ),
    (
        "arity-mismatch",
        "function add(a, b) { return a + b; }\nconsole.log(add(2));",
        ["NaN"],  # b is undefined, 2 + undefined
        CheckCategory.ARITY_MISMATCH,
        2,
    ),
]


@pytest.mark.parametrize(
    "name,source,consequence,category,line",
    FIXTURES,
    ids=[row[0] for row in FIXTURES],
)
def test_pitfall_row(name, source, consequence, category, line):
    program, diagnostics = parse(source, f"{name}.js")
    assert not diagnostics, [d.render() for d in diagnostics]

    permissive = run_program(program, Mode.PERMISSIVE, io=StubIoPort())
    assert permissive.status.value == "completed", permissive.diagnostic
    assert permissive.printed == consequence

    strict = run_program(program, Mode.STRICT, io=StubIoPort())
    assert strict.status.value == "aborted"
    assert strict.diagnostic.category == category.value
    assert strict.diagnostic.span.start_line == line


def test_all_five_table_rows_covered():
    assert {row[3] for row in FIXTURES} == {
        CheckCategory.LOOSE_COMPARISON,
        CheckCategory.UNINITIALIZED_VARIABLE,
        CheckCategory.CONDITIONAL_ASSIGNMENT,
        CheckCategory.OP_TYPE_MISMATCH,
        CheckCategory.ARITY_MISMATCH,
    }
