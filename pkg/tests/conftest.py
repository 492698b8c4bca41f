"""Shared helpers for the test suite."""

from __future__ import annotations

import contextlib

import pytest

from robojs.lang.parser import parse

# One line per acceptance criterion, printed in the terminal summary so a
# plain `pytest -v` run ends with an explicit PASS/FAIL per guarantee.
ACCEPTANCE_LINES: list[str] = []


class CriterionLog:
    def __init__(self, name: str):
        self.name = name
        self.detail = ""


@contextlib.contextmanager
def criterion(name: str):
    """Record one acceptance criterion's outcome for the summary."""
    log = CriterionLog(name)
    try:
        yield log
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL  {name}  [{type(exc).__name__}]")
        raise
    ACCEPTANCE_LINES.append(
        f"PASS  {name}" + (f"  [{log.detail}]" if log.detail else "")
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def parse_ok():
    """Parse source that must be syntactically clean; return the program."""

    def _parse(source: str, file_id: str = "<test>"):
        program, diagnostics = parse(source, file_id)
        assert not diagnostics, [d.render() for d in diagnostics]
        assert program is not None
        return program

    return _parse
