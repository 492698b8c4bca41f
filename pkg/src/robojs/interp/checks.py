"""The runtime checks behind strict mode.

Both execution paths share these functions: the strict interpreter calls
them directly at each checked site, and the permissive interpreter exposes
them as the `__rjs*` natives that instrumented programs call. Keeping one
implementation makes the two paths agree by construction.
"""

from __future__ import annotations

from ..diagnostics import (
    CheckCategory,
    CheckFailure,
    msg_add_mismatch,
    msg_arith_numbers,
    msg_arity,
    msg_compare_numbers,
    msg_conditional_assignment,
    msg_function_compared,
    msg_missing_member,
    msg_non_boolean_condition,
    msg_not_a_function,
    msg_uninitialized,
    msg_unary_minus,
)
from ..span import SourceSpan
from .values import (
    BuiltinFunction,
    UNDEFINED,
    UserFunction,
    Value,
    is_function,
    is_number,
    is_string,
    js_arith,
    js_compare,
)


def function_name(value: Value) -> str:
    if isinstance(value, UserFunction):
        return value.name
    if isinstance(value, BuiltinFunction):
        return value.name
    raise TypeError("not a function value")


def check_read(value: Value, name: str, span: SourceSpan) -> Value:
    if value is UNDEFINED:
        raise CheckFailure(
            CheckCategory.UNINITIALIZED_VARIABLE.value, msg_uninitialized(name), span
        )
    return value


def check_neg(value: Value, span: SourceSpan) -> float:
    if not is_number(value):
        raise CheckFailure(
            CheckCategory.OP_TYPE_MISMATCH.value, msg_unary_minus(), span
        )
    return -value


def check_add(a: Value, b: Value, span: SourceSpan) -> Value:
    if is_number(a) and is_number(b):
        return a + b
    if is_string(a) and is_string(b):
        return a + b
    raise CheckFailure(CheckCategory.OP_TYPE_MISMATCH.value, msg_add_mismatch(), span)


def check_arith(op: str, a: Value, b: Value, span: SourceSpan) -> float:
    if not (is_number(a) and is_number(b)):
        raise CheckFailure(
            CheckCategory.OP_TYPE_MISMATCH.value, msg_arith_numbers(op), span
        )
    return js_arith(op, a, b)


def check_compare(op: str, a: Value, b: Value, span: SourceSpan) -> bool:
    for operand in (a, b):
        if is_function(operand):
            raise CheckFailure(
                CheckCategory.FUNCTION_COMPARED_AS_VALUE.value,
                msg_function_compared(function_name(operand)),
                span,
            )
    if not (is_number(a) and is_number(b)):
        raise CheckFailure(
            CheckCategory.OP_TYPE_MISMATCH.value, msg_compare_numbers(op), span
        )
    return js_compare(op, a, b)


def check_condition(value: Value, is_assignment: bool, span: SourceSpan) -> bool:
    if value is True or value is False:
        return value
    if is_assignment:
        raise CheckFailure(
            CheckCategory.CONDITIONAL_ASSIGNMENT.value,
            msg_conditional_assignment(),
            span,
        )
    raise CheckFailure(
        CheckCategory.NON_BOOLEAN_CONDITION.value, msg_non_boolean_condition(), span
    )


def check_member_exists(
    member: Value | None, namespace: str, name: str, span: SourceSpan
) -> Value:
    if member is None:
        raise CheckFailure(
            CheckCategory.MISSING_MEMBER.value, msg_missing_member(namespace, name), span
        )
    return member


def check_callable(value: Value, display_name: str, span: SourceSpan) -> Value:
    if not is_function(value):
        raise CheckFailure(
            CheckCategory.OP_TYPE_MISMATCH.value, msg_not_a_function(display_name), span
        )
    return value


def check_arity(fn: Value, argc: int, span: SourceSpan) -> None:
    if isinstance(fn, UserFunction):
        expected = fn.arity
        name = fn.name
    elif isinstance(fn, BuiltinFunction):
        if fn.arity is None:
            return
        expected = fn.arity
        name = fn.name
    else:
        raise TypeError("not a function value")
    if argc != expected:
        raise CheckFailure(
            CheckCategory.ARITY_MISMATCH.value, msg_arity(name, expected, argc), span
        )


def check_declared_arity(name: str, expected: int, argc: int, span: SourceSpan) -> None:
    if argc != expected:
        raise CheckFailure(
            CheckCategory.ARITY_MISMATCH.value, msg_arity(name, expected, argc), span
        )
