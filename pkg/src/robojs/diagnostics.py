"""Diagnostics shared by the syntax, static-check, and execution phases."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .span import SourceSpan


class Phase(enum.Enum):
    SYNTAX = "syntax"
    STATIC = "static"
    DYNAMIC = "dynamic"


class CheckCategory(enum.Enum):
    """Program mistakes that run quietly in plain JavaScript but are stopped here."""

    LOOSE_COMPARISON = "loose-comparison"
    UNINITIALIZED_VARIABLE = "uninitialized-variable"
    CONDITIONAL_ASSIGNMENT = "conditional-assignment"
    OP_TYPE_MISMATCH = "op-type-mismatch"
    ARITY_MISMATCH = "arity-mismatch"
    MISSING_MEMBER = "missing-member"
    NON_BOOLEAN_CONDITION = "non-boolean-condition"
    FUNCTION_COMPARED_AS_VALUE = "function-compared-as-value"


# Categories outside CheckCategory used by the syntax phase and the robot layer.
SYNTAX_UNEXPECTED = "unexpected-token"
SYNTAX_UNTERMINATED_STRING = "unterminated-string"
SYNTAX_BAD_CHAR = "unsupported-character"
SYNTAX_BAD_ESCAPE = "unsupported-escape"
SYNTAX_REDECLARATION = "redeclaration"
SYNTAX_ELSE_IF_HINT = "else-if-hint"
SYNTAX_NOT_ROBOJS = "not-robojs"
SYNTAX_RESERVED_NAME = "reserved-name"
STATIC_UNKNOWN_IDENTIFIER = "unknown-identifier"
DYNAMIC_REFERENCE_ERROR = "reference-error"
DYNAMIC_ROBOT_ERROR = "robot-error"


# ----------------------------------------------------------------------
# message templates, shared by the static checker and the runtime checks
# so the same mistake reads the same in every phase


def msg_compare_numbers(op: str) -> str:
    return f'Arguments of "{op}" must both be numbers.'


def msg_arith_numbers(op: str) -> str:
    return f'Arguments of "{op}" must both be numbers.'


def msg_add_mismatch() -> str:
    return 'Arguments of "+" must both be numbers or both be strings.'


def msg_unary_minus() -> str:
    return 'Argument of unary "-" must be a number.'


def msg_loose(op: str) -> str:
    strict = "===" if op == "==" else "!=="
    return f'Operator "{op}" is not allowed; use "{strict}" instead.'


def msg_arity(name: str, expected: int, got: int) -> str:
    plural = "argument" if expected == 1 else "arguments"
    return f'Function "{name}" expects {expected} {plural}, but got {got}.'


def msg_uninitialized(name: str) -> str:
    return f'Variable "{name}" is used before it has a value.'


def msg_conditional_assignment() -> str:
    return (
        "Condition is an assignment, and its value is not true or false; "
        'use "===" to compare.'
    )


def msg_non_boolean_condition() -> str:
    return "Condition must be exactly true or false."


def msg_missing_member(namespace: str, name: str) -> str:
    return f'"{namespace}" has no member named "{name}".'


def msg_function_compared(name: str) -> str:
    return f'"{name}" is a function; did you mean to call it with ()?'


def msg_not_a_function(name: str) -> str:
    return f'"{name}" is not a function.'


def msg_not_defined(name: str) -> str:
    return f'"{name}" is not defined.'


@dataclass(frozen=True)
class Diagnostic:
    """One reported problem, printable as file:line:col: phase/category: message."""

    phase: Phase
    category: str
    message: str
    span: SourceSpan

    def render(self) -> str:
        s = self.span
        return (
            f"{s.file_id}:{s.start_line}:{s.start_col}: "
            f"{self.phase.value}/{self.category}: {self.message}"
        )

    def __str__(self) -> str:
        return self.render()


class CheckFailure(Exception):
    """Raised by a runtime check; converted into a dynamic Diagnostic."""

    def __init__(self, category: str, message: str, span: SourceSpan):
        super().__init__(message)
        self.category = category
        self.message = message
        self.span = span

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(Phase.DYNAMIC, self.category, self.message, self.span)
