"""Runtime values and the JavaScript coercion rules used in permissive mode.

Values are numbers (floats), strings, booleans, undefined, and functions.
There are no objects, arrays, or null. Permissive mode reproduces what a
JavaScript engine does with these values, including the quirks the checks
exist to catch: ToNumber coercion in arithmetic and ordering, NaN
comparisons being false, `==` coercion, and truthiness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, TYPE_CHECKING

from ..jsnum import format_number, is_negative_zero, to_number

if TYPE_CHECKING:
    from ..lang.nodes import FuncDecl


class _Undefined:
    _instance: _Undefined | None = None

    def __new__(cls) -> _Undefined:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undefined"


UNDEFINED = _Undefined()


@dataclass
class Env:
    """Lexical environment: one scope's bindings plus a parent link."""

    parent: Env | None = None
    bindings: dict[str, Any] = field(default_factory=dict)

    def define(self, name: str, value: Any) -> None:
        self.bindings[name] = value

    def lookup(self, name: str) -> tuple[bool, Any]:
        env: Env | None = self
        while env is not None:
            if name in env.bindings:
                return True, env.bindings[name]
            env = env.parent
        return False, None

    def assign(self, name: str, value: Any) -> bool:
        env: Env | None = self
        while env is not None:
            if name in env.bindings:
                env.bindings[name] = value
                return True
            env = env.parent
        return False


@dataclass
class UserFunction:
    decl: FuncDecl
    env: Env

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def arity(self) -> int:
        return len(self.decl.params)


@dataclass
class BuiltinFunction:
    name: str  # display name, e.g. "robot.moveTo"
    arity: int | None  # None means variadic
    impl: Callable[..., Any]


Value = Any  # float | bool | str | _Undefined | UserFunction | BuiltinFunction


def is_function(value: Value) -> bool:
    return isinstance(value, (UserFunction, BuiltinFunction))


def is_number(value: Value) -> bool:
    return isinstance(value, float)


def is_string(value: Value) -> bool:
    return isinstance(value, str)


def is_boolean(value: Value) -> bool:
    return isinstance(value, bool)


def type_name(value: Value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if value is UNDEFINED:
        return "undefined"
    if is_function(value):
        return "function"
    raise TypeError(f"not a language value: {value!r}")


# ----------------------------------------------------------------------
# JavaScript conversions


def truthy(value: Value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return not (value == 0.0 or math.isnan(value))
    if isinstance(value, str):
        return value != ""
    if value is UNDEFINED:
        return False
    return True  # functions


def coerce_number(value: Value) -> float:
    """ToNumber: booleans count, strings parse, everything else is NaN."""
    if isinstance(value, bool):
        return 1.0 if value else 0.0
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return to_number(value)
    return math.nan  # undefined and functions


def coerce_string(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, str):
        return value
    if value is UNDEFINED:
        return "undefined"
    if isinstance(value, UserFunction):
        return f"[Function: {value.name}]"
    if isinstance(value, BuiltinFunction):
        short = value.name.rsplit(".", 1)[-1]
        return f"[Function: {short}]"
    raise TypeError(f"not a language value: {value!r}")


def inspect(value: Value) -> str:
    """How console.log shows one argument (strings raw, -0 visible)."""
    if isinstance(value, float) and is_negative_zero(value):
        return "-0"
    return coerce_string(value)


# ----------------------------------------------------------------------
# permissive operator semantics


def js_add(a: Value, b: Value) -> Value:
    if isinstance(a, str) or isinstance(b, str) or is_function(a) or is_function(b):
        return coerce_string(a) + coerce_string(b)
    return coerce_number(a) + coerce_number(b)


def js_arith(op: str, a: Value, b: Value) -> float:
    x, y = coerce_number(a), coerce_number(b)
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        if y == 0.0:
            if x == 0.0 or math.isnan(x) or math.isnan(y):
                return math.nan
            sign = math.copysign(1.0, x) * math.copysign(1.0, y)
            return math.inf * sign
        return x / y
    if op == "%":
        if y == 0.0 or math.isnan(x) or math.isnan(y) or math.isinf(x):
            return math.nan
        if math.isinf(y):
            return x
        return math.fmod(x, y)
    raise ValueError(f"unknown arithmetic operator {op}")


def js_compare(op: str, a: Value, b: Value) -> bool:
    """Ordering, with functions treated as NaN so they never compare true."""
    if isinstance(a, str) and isinstance(b, str):
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b
    x, y = coerce_number(a), coerce_number(b)
    if math.isnan(x) or math.isnan(y):
        return False
    if op == "<":
        return x < y
    if op == "<=":
        return x <= y
    if op == ">":
        return x > y
    return x >= y


def js_loose_eq(a: Value, b: Value) -> bool:
    if a is UNDEFINED or b is UNDEFINED:
        return a is UNDEFINED and b is UNDEFINED
    if is_function(a) and is_function(b):
        return a is b
    if is_function(a):
        return js_loose_eq(coerce_string(a), b)
    if is_function(b):
        return js_loose_eq(a, coerce_string(b))
    if isinstance(a, bool):
        return js_loose_eq(1.0 if a else 0.0, b)
    if isinstance(b, bool):
        return js_loose_eq(a, 1.0 if b else 0.0)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, str):
        return js_loose_eq(to_number(a), b)
    if isinstance(b, str):
        return js_loose_eq(a, to_number(b))
    assert isinstance(a, float) and isinstance(b, float)
    return a == b  # NaN != NaN comes free with floats


def js_strict_eq(a: Value, b: Value) -> bool:
    if a is UNDEFINED or b is UNDEFINED:
        return a is UNDEFINED and b is UNDEFINED
    if is_function(a) or is_function(b):
        return a is b
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, float) and isinstance(b, float):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return False
