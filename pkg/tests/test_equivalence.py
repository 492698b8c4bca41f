"""Strict mode and instrumented-permissive mode agree on every program.

For any statically-clean program P, running P under the strict engine must be
observably identical to rewriting P (check probes injected) and running the
result under the permissive engine: same printed lines on success, or the same
(category, position) on abort.  A larger randomized sweep lives in the
acceptance suite; this file keeps a fast slice of it plus a few hand-picked
shapes that previously regressed.
"""

from copy import deepcopy

import pytest

from progen import generate_program
from robojs.interp import (
    ExecStatus,
    Mode,
    StubIoPort,
    run_program,
)
from robojs.check import instrument, static_check
from robojs.lang import parse

BUDGET = 2_000_000


def observe(outcome):
    """Project an execution outcome onto the comparable surface."""
    if outcome.status is ExecStatus.COMPLETED:
        return ("completed", tuple(outcome.printed))
    diag = outcome.diagnostic
    detail = None
    if diag is not None:
        detail = (diag.category, diag.span.position())
    return (outcome.status.value, detail, tuple(outcome.printed))


def dual_run(source: str, sense_plan=None):
    plan = sense_plan or {}
    program, diagnostics = parse(source, "gen.js")
    assert program is not None, diagnostics
    findings = static_check(program)
    assert findings == [], "generated source must be statically clean"

    strict = run_program(
        program,
        Mode.STRICT,
        io=StubIoPort(sense_values=deepcopy(plan)),
        budget=BUDGET,
    )

    rewritten, rewrite_diags = parse(instrument(program), "gen.js")
    assert rewritten is not None, rewrite_diags
    permissive = run_program(
        rewritten,
        Mode.PERMISSIVE,
        io=StubIoPort(sense_values=deepcopy(plan)),
        budget=BUDGET,
        diagnostic_file_id="gen.js",
    )
    return strict, permissive


def assert_equivalent(source: str, sense_plan=None):
    strict, permissive = dual_run(source, sense_plan)
    assert observe(strict) == observe(permissive), source


class TestHandPickedShapes:
    def test_clean_arithmetic(self):
        assert_equivalent(
            'let a = 2;\nlet b = a * 3 + 1;\nconsole.log("v", b);\n'
        )

    def test_uninitialized_read_aborts_identically(self):
        strict, permissive = dual_run("let a;\nlet b = a + 1;\nconsole.log(b);\n")
        assert strict.status is ExecStatus.ABORTED
        assert observe(strict) == observe(permissive)

    def test_arity_mismatch_through_alias(self):
        # A direct wrong-arity call is already a static finding; calling
        # through an alias defers the mismatch to runtime.
        src = (
            "function f(a, b) { return a + b; }\n"
            "let g = f;\n"
            "console.log(g(1));\n"
        )
        strict, permissive = dual_run(src)
        assert strict.status is ExecStatus.ABORTED
        assert strict.diagnostic.category == "arity-mismatch"
        assert observe(strict) == observe(permissive)

    def test_output_before_abort_preserved(self):
        src = 'console.log("first");\nlet s = "x" - 1;\nconsole.log(s);\n'
        strict, permissive = dual_run(src)
        assert strict.printed == ["first"]
        assert observe(strict) == observe(permissive)

    def test_deep_recursion_budget(self):
        src = "function f(n) { return f(n + 1); }\nlet r = f(0);\n"
        strict, permissive = dual_run(src)
        assert strict.status is ExecStatus.BUDGET_EXHAUSTED
        assert observe(strict) == observe(permissive)

    def test_loop_with_function_calls(self):
        src = (
            "function step(x) { return x * 2 - 1; }\n"
            "let acc = 0;\n"
            "for (let i = 0; i < 5; i += 1) { acc = step(acc) + i; }\n"
            "console.log(acc);\n"
        )
        assert_equivalent(src)


@pytest.mark.parametrize("seed", range(120))
def test_generated_program_equivalence(seed):
    g = generate_program(seed)
    assert_equivalent(g.source, g.sense_plan)
