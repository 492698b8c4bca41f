"""Tree-walking interpreter with two execution modes.

Permissive mode runs programs the way a JavaScript engine would: missing
arguments become undefined, extra arguments are dropped, arithmetic and
comparisons coerce their operands, conditions use truthiness, and missing
members read as undefined.

Strict mode runs the same programs with a check at every risky site:
comparisons and arithmetic must see numbers (`+` also accepts two
strings), conditions must be exactly true or false, a variable read must
not produce undefined, members must exist, and calls must match the
callee's declared argument count.

Strict mode and "instrument, then run permissively" are two routes to the
same behavior: the strict interpreter calls the functions in `checks` at
each site, and the permissive interpreter exposes those same functions as
the `__rjs*` natives that instrumented programs call, with every check
carrying the original source span.

The program is one logical task. It yields at every statement boundary
(where stop requests and the step budget are honored) and suspends inside
`IoPort.call` while a robot command is in flight.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from ..api.manifest import ApiEntry, lookup
from ..diagnostics import (
    CheckCategory,
    CheckFailure,
    Diagnostic,
    DYNAMIC_REFERENCE_ERROR,
    DYNAMIC_ROBOT_ERROR,
    msg_loose,
    msg_not_defined,
)
from ..lang.nodes import (
    Assign,
    Binary,
    Block,
    BoolLit,
    Call,
    Expr,
    ExprStmt,
    For,
    FuncDecl,
    Ident,
    If,
    LetDecl,
    Member,
    NumberLit,
    Program,
    Return,
    Stmt,
    StringLit,
    Unary,
    While,
)
from ..span import SourceSpan
from . import checks
from .ioport import IoPort, IoRequest, StopToken
from .values import (
    BuiltinFunction,
    Env,
    UNDEFINED,
    UserFunction,
    Value,
    inspect,
    js_add,
    js_arith,
    js_compare,
    js_loose_eq,
    js_strict_eq,
    coerce_number,
    truthy,
)

DEFAULT_STEP_BUDGET = 10_000_000
MAX_CALL_DEPTH = 200


def _ensure_stack_headroom() -> None:
    """Raise the host recursion limit (once, monotonically) so that the
    MAX_CALL_DEPTH guard always trips before the host stack does; each
    interpreted call consumes several host frames."""
    import sys

    needed = 10 * MAX_CALL_DEPTH + 1000
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)


class Mode(enum.Enum):
    PERMISSIVE = "permissive"
    STRICT = "strict"


class ExecStatus(enum.Enum):
    COMPLETED = "completed"
    ABORTED = "aborted"
    STOPPED = "stopped"
    BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class ExecOutcome:
    status: ExecStatus
    printed: list[str]
    diagnostic: Diagnostic | None = None
    steps: int = 0

    def output_text(self) -> str:
        return "".join(line + "\n" for line in self.printed)


@dataclass
class Frame:
    name: str
    argc: int
    call_span: SourceSpan


class _Return(Exception):
    def __init__(self, value: Value):
        self.value = value


class _Stopped(Exception):
    pass


class _BudgetExhausted(Exception):
    pass


_SHORTHAND = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}
_ORDERING = ("<", "<=", ">", ">=")
_ARITH = ("-", "*", "/", "%")


class _PendingMember:
    """A member callee awaiting resolution until after argument evaluation."""

    __slots__ = ("namespace", "name", "span")

    def __init__(self, namespace: str, name: str, span: SourceSpan):
        self.namespace = namespace
        self.name = name
        self.span = span

    @property
    def display(self) -> str:
        return f"{self.namespace}.{self.name}"


class Interpreter:
    def __init__(
        self,
        program: Program,
        mode: Mode | str = Mode.STRICT,
        io: IoPort | None = None,
        *,
        budget: int = DEFAULT_STEP_BUDGET,
        stop: StopToken | None = None,
        on_print: Callable[[str], None] | None = None,
        diagnostic_file_id: str | None = None,
    ):
        _ensure_stack_headroom()
        self.program = program
        self.mode = Mode(mode) if isinstance(mode, str) else mode
        self.io = io
        self.budget = budget
        self.stop_token = stop if stop is not None else StopToken()
        self.on_print = on_print
        self.file_id = diagnostic_file_id or program.file_id
        self.printed: list[str] = []
        self.steps = 0
        self.frames: list[Frame] = []
        self.current_env: Env = Env()
        self._next_request_id = 1
        self.root_env = Env()
        self._install_natives(self.root_env)
        self.global_env = Env(parent=self.root_env)

    # ------------------------------------------------------------------
    # driving

    def run(self) -> ExecOutcome:
        try:
            self._exec_block_stmts(self.program.statements, self.global_env)
        except CheckFailure as failure:
            return ExecOutcome(
                ExecStatus.ABORTED, self.printed, failure.diagnostic(), self.steps
            )
        except _Stopped:
            return ExecOutcome(ExecStatus.STOPPED, self.printed, None, self.steps)
        except _BudgetExhausted:
            return ExecOutcome(
                ExecStatus.BUDGET_EXHAUSTED, self.printed, None, self.steps
            )
        return ExecOutcome(ExecStatus.COMPLETED, self.printed, None, self.steps)

    def eval_expression(self, expr: Expr, env: Env | None = None) -> Value:
        """Evaluate one expression (the REPL path); checks may raise."""
        return self._eval(expr, env if env is not None else self.global_env)

    def _step(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise _BudgetExhausted()
        if self.stop_token.stopped():
            raise _Stopped()

    def _print(self, line: str) -> None:
        self.printed.append(line)
        if self.on_print is not None:
            self.on_print(line)

    def _strict(self) -> bool:
        return self.mode is Mode.STRICT

    # ------------------------------------------------------------------
    # statements

    def _exec_block_stmts(self, statements: tuple[Stmt, ...], env: Env) -> None:
        for stmt in statements:
            if isinstance(stmt, FuncDecl):
                env.define(stmt.name, UserFunction(stmt, env))
        for stmt in statements:
            self._exec(stmt, env)

    def _exec(self, stmt: Stmt, env: Env) -> None:
        self._step()
        if isinstance(stmt, LetDecl):
            value = self._eval(stmt.init, env) if stmt.init is not None else UNDEFINED
            env.define(stmt.name, value)
        elif isinstance(stmt, ExprStmt):
            self._eval(stmt.expr, env)
        elif isinstance(stmt, Block):
            self._exec_block_stmts(stmt.statements, Env(parent=env))
        elif isinstance(stmt, If):
            node: Stmt | None = stmt
            while isinstance(node, If):
                if self._condition(node.condition, env):
                    self._exec_block_stmts(
                        node.then_branch.statements, Env(parent=env)
                    )
                    return
                node = node.else_branch
            if node is not None:
                assert isinstance(node, Block)
                self._exec_block_stmts(node.statements, Env(parent=env))
        elif isinstance(stmt, While):
            while True:
                self._step()
                if not self._condition(stmt.condition, env):
                    break
                self._exec_block_stmts(stmt.body.statements, Env(parent=env))
        elif isinstance(stmt, For):
            header = Env(parent=env)
            if isinstance(stmt.init, LetDecl):
                value = (
                    self._eval(stmt.init.init, header)
                    if stmt.init.init is not None
                    else UNDEFINED
                )
                header.define(stmt.init.name, value)
            elif isinstance(stmt.init, ExprStmt):
                self._eval(stmt.init.expr, header)
            while True:
                self._step()
                if stmt.condition is not None and not self._condition(
                    stmt.condition, header
                ):
                    break
                self._exec_block_stmts(stmt.body.statements, Env(parent=header))
                if stmt.update is not None:
                    self._eval(stmt.update, header)
        elif isinstance(stmt, FuncDecl):
            pass  # bound when the enclosing block was entered
        elif isinstance(stmt, Return):
            value = self._eval(stmt.value, env) if stmt.value is not None else UNDEFINED
            raise _Return(value)
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    def _condition(self, expr: Expr, env: Env) -> bool:
        value = self._eval(expr, env)
        if self._strict():
            return checks.check_condition(
                value, isinstance(expr, Assign), self._respan(expr.span)
            )
        return truthy(value)

    # ------------------------------------------------------------------
    # expressions

    def _respan(self, span: SourceSpan) -> SourceSpan:
        if span.file_id == self.file_id:
            return span
        return SourceSpan(
            self.file_id,
            span.start_line,
            span.start_col,
            span.end_line,
            span.end_col,
        )

    def _eval(self, expr: Expr, env: Env) -> Value:
        prev = self.current_env
        self.current_env = env
        try:
            return self._eval_inner(expr, env)
        finally:
            self.current_env = prev

    def _eval_inner(self, expr: Expr, env: Env) -> Value:
        if isinstance(expr, NumberLit):
            return expr.value
        if isinstance(expr, StringLit):
            return expr.value
        if isinstance(expr, BoolLit):
            return expr.value
        if isinstance(expr, Ident):
            return self._read_variable(expr.name, self._respan(expr.span), env)
        if isinstance(expr, Member):
            return self._eval_member(expr)
        if isinstance(expr, Unary):
            self._step()
            operand = self._eval(expr.operand, env)
            if expr.op == "!":
                return not truthy(operand)
            if self._strict():
                return checks.check_neg(operand, self._respan(expr.span))
            return -coerce_number(operand)
        if isinstance(expr, Binary):
            return self._eval_binary(expr, env)
        if isinstance(expr, Assign):
            return self._eval_assign(expr, env)
        if isinstance(expr, Call):
            return self._eval_call(expr, env)
        raise TypeError(f"unknown expression {expr!r}")

    def _read_variable(self, name: str, span: SourceSpan, env: Env) -> Value:
        found, value = env.lookup(name)
        if not found:
            raise CheckFailure(DYNAMIC_REFERENCE_ERROR, msg_not_defined(name), span)
        if self._strict():
            return checks.check_read(value, name, span)
        return value

    def _eval_member(self, expr: Member) -> Value:
        member = self._resolve_member(expr.namespace, expr.name)
        if self._strict():
            return checks.check_member_exists(
                member, expr.namespace, expr.name, self._respan(expr.span)
            )
        return member if member is not None else UNDEFINED

    def _eval_binary(self, expr: Binary, env: Env) -> Value:
        op = expr.op
        if op == "&&":
            left = self._eval(expr.left, env)
            if not truthy(left):
                return left
            return self._eval(expr.right, env)
        if op == "||":
            left = self._eval(expr.left, env)
            if truthy(left):
                return left
            return self._eval(expr.right, env)
        self._step()
        left = self._eval(expr.left, env)
        right = self._eval(expr.right, env)
        span = self._respan(expr.span)
        if op == "===":
            return js_strict_eq(left, right)
        if op == "!==":
            return not js_strict_eq(left, right)
        if op in ("==", "!="):
            if self._strict():
                # Unreachable after the static pre-check, but the REPL
                # evaluates expressions directly.
                raise CheckFailure(
                    CheckCategory.LOOSE_COMPARISON.value, msg_loose(op), span
                )
            result = js_loose_eq(left, right)
            return result if op == "==" else not result
        if self._strict():
            if op == "+":
                return checks.check_add(left, right, span)
            if op in _ARITH:
                return checks.check_arith(op, left, right, span)
            if op in _ORDERING:
                return checks.check_compare(op, left, right, span)
            raise TypeError(f"unknown operator {op}")
        if op == "+":
            return js_add(left, right)
        if op in _ARITH:
            return js_arith(op, left, right)
        if op in _ORDERING:
            return js_compare(op, left, right)
        raise TypeError(f"unknown operator {op}")

    def _eval_assign(self, expr: Assign, env: Env) -> Value:
        name = expr.target.name
        target_span = self._respan(expr.target.span)
        if expr.op == "=":
            value = self._eval(expr.value, env)
        else:
            found, current = env.lookup(name)
            if not found:
                raise CheckFailure(
                    DYNAMIC_REFERENCE_ERROR, msg_not_defined(name), target_span
                )
            if self._strict():
                current = checks.check_read(current, name, target_span)
            rhs = self._eval(expr.value, env)
            base = _SHORTHAND[expr.op]
            span = self._respan(expr.span)
            if self._strict():
                if base == "+":
                    value = checks.check_add(current, rhs, span)
                else:
                    value = checks.check_arith(base, current, rhs, span)
            else:
                value = (
                    js_add(current, rhs)
                    if base == "+"
                    else js_arith(base, current, rhs)
                )
        if not env.assign(name, value):
            raise CheckFailure(
                DYNAMIC_REFERENCE_ERROR, msg_not_defined(name), target_span
            )
        return value

    # ------------------------------------------------------------------
    # calls

    def _eval_call(self, expr: Call, env: Env) -> Value:
        self._step()
        callee = expr.callee
        span = self._respan(expr.span)
        if isinstance(callee, Member):
            target: Value | _PendingMember = _PendingMember(
                callee.namespace, callee.name, self._respan(callee.span)
            )
            display = target.display
        else:
            target = self._read_variable(callee.name, self._respan(callee.span), env)
            display = callee.name
        args = [self._eval(arg, env) for arg in expr.args]
        if isinstance(target, _PendingMember):
            member = self._resolve_member(target.namespace, target.name)
            if self._strict():
                target = checks.check_member_exists(
                    member, target.namespace, target.name, span
                )
            else:
                target = member if member is not None else UNDEFINED
        fn = checks.check_callable(target, display, span)
        if self._strict():
            checks.check_arity(fn, len(args), span)
        if isinstance(fn, BuiltinFunction):
            if not self._strict() and fn.arity is not None:
                args = self._fit(args, fn.arity)
            return fn.impl(args, span)
        assert isinstance(fn, UserFunction)
        return self.call_user_function(fn, args, span)

    def _fit(self, args: list[Value], arity: int) -> list[Value]:
        if len(args) < arity:
            return args + [UNDEFINED] * (arity - len(args))
        return args[:arity]

    def call_user_function(
        self, fn: UserFunction, args: list[Value], call_span: SourceSpan
    ) -> Value:
        if len(self.frames) >= MAX_CALL_DEPTH:
            raise _BudgetExhausted()
        self._step()
        bound = args if self._strict() else self._fit(args, fn.arity)
        frame = Frame(fn.name, len(args), call_span)
        local = Env(parent=fn.env)
        for param, value in zip(fn.decl.params, bound):
            local.define(param.name, value)
        self.frames.append(frame)
        try:
            self._exec_block_stmts(fn.decl.body.statements, local)
        except _Return as ret:
            return ret.value
        finally:
            self.frames.pop()
        return UNDEFINED

    # ------------------------------------------------------------------
    # builtin namespaces and natives

    def _resolve_member(self, namespace: str, name: str) -> BuiltinFunction | None:
        entry = lookup(namespace, name)
        if entry is None:
            return None
        return self._builtin_for(entry)

    def _builtin_for(self, entry: ApiEntry) -> BuiltinFunction:
        if entry.kind == "print":
            return BuiltinFunction(entry.full_name, None, self._impl_print)
        return BuiltinFunction(
            entry.full_name,
            entry.arity,
            self._make_io_impl(entry),
        )

    def _impl_print(self, args: list[Value], span: SourceSpan) -> Value:
        self._print(" ".join(inspect(a) for a in args))
        return UNDEFINED

    def _make_io_impl(self, entry: ApiEntry):
        def impl(args: list[Value], span: SourceSpan) -> Value:
            if self.io is None:
                raise CheckFailure(
                    DYNAMIC_ROBOT_ERROR,
                    f"{entry.full_name}: no robot connection in this run.",
                    span,
                )
            request = IoRequest(self._next_request_id, entry.full_name, tuple(args))
            self._next_request_id += 1
            reply = self.io.call(request, self.stop_token)
            if reply is None:
                raise _Stopped()
            if reply.error is not None:
                raise CheckFailure(
                    reply.error_category,
                    f"{entry.full_name}: {reply.error}",
                    span,
                )
            if reply.value is None:
                return UNDEFINED
            if isinstance(reply.value, (int, float)) and not isinstance(
                reply.value, bool
            ):
                return float(reply.value)
            return reply.value

        return impl

    # ------------------------------------------------------------------
    # the __rjs* natives used by instrumented programs

    def _install_natives(self, env: Env) -> None:
        def native(name: str, impl: Callable[[list[Value], SourceSpan], Value]) -> None:
            env.define(name, BuiltinFunction(name, None, impl))

        def span_of(args: list[Value], start: int) -> SourceSpan:
            try:
                sl, sc, el, ec = (int(args[start + i]) for i in range(4))
                return SourceSpan(self.file_id, sl, sc, el, ec)
            except (TypeError, ValueError, IndexError):
                raise CheckFailure(
                    DYNAMIC_ROBOT_ERROR,
                    "malformed check call.",
                    SourceSpan(self.file_id, 1, 1, 1, 1),
                ) from None

        def binary(name: str, op: str) -> None:
            def impl(args: list[Value], _span: SourceSpan) -> Value:
                span = span_of(args, 2)
                a, b = args[0], args[1]
                if op == "+":
                    return checks.check_add(a, b, span)
                if op in _ARITH:
                    return checks.check_arith(op, a, b, span)
                return checks.check_compare(op, a, b, span)

            native(name, impl)

        binary("__rjsAdd", "+")
        binary("__rjsSub", "-")
        binary("__rjsMul", "*")
        binary("__rjsDiv", "/")
        binary("__rjsMod", "%")
        binary("__rjsLT", "<")
        binary("__rjsLE", "<=")
        binary("__rjsGT", ">")
        binary("__rjsGE", ">=")

        def rjs_read(args: list[Value], _span: SourceSpan) -> Value:
            name = args[0]
            span = span_of(args, 1)
            assert isinstance(name, str)
            found, value = self.current_env.lookup(name)
            if not found:
                raise CheckFailure(DYNAMIC_REFERENCE_ERROR, msg_not_defined(name), span)
            return checks.check_read(value, name, span)

        native("__rjsRead", rjs_read)

        def rjs_neg(args: list[Value], _span: SourceSpan) -> Value:
            return checks.check_neg(args[0], span_of(args, 1))

        native("__rjsNeg", rjs_neg)

        def rjs_cond(args: list[Value], _span: SourceSpan) -> Value:
            value, is_assign = args[0], args[1]
            return checks.check_condition(value, bool(is_assign), span_of(args, 2))

        native("__rjsCond", rjs_cond)

        def rjs_member(args: list[Value], _span: SourceSpan) -> Value:
            namespace, name = args[0], args[1]
            span = span_of(args, 2)
            assert isinstance(namespace, str) and isinstance(name, str)
            member = self._resolve_member(namespace, name)
            return checks.check_member_exists(member, namespace, name, span)

        native("__rjsMember", rjs_member)

        def rjs_call_member(args: list[Value], _span: SourceSpan) -> Value:
            namespace, name = args[0], args[1]
            span = span_of(args, 2)
            assert isinstance(namespace, str) and isinstance(name, str)
            call_args = args[6:]
            member = self._resolve_member(namespace, name)
            fn = checks.check_member_exists(member, namespace, name, span)
            checks.check_arity(fn, len(call_args), span)
            return fn.impl(list(call_args), span)

        native("__rjsCallMember", rjs_call_member)

        def rjs_call(args: list[Value], _span: SourceSpan) -> Value:
            fn_value, display = args[0], args[1]
            span = span_of(args, 2)
            assert isinstance(display, str)
            call_args = list(args[6:])
            fn = checks.check_callable(fn_value, display, span)
            if isinstance(fn, BuiltinFunction):
                checks.check_arity(fn, len(call_args), span)
                return fn.impl(call_args, span)
            assert isinstance(fn, UserFunction)
            return self.call_user_function(fn, call_args, span)

        native("__rjsCall", rjs_call)

        def rjs_arity_check(args: list[Value], span: SourceSpan) -> Value:
            name, expected = args[0], args[1]
            assert isinstance(name, str)
            frame = self.frames[-1] if self.frames else None
            if frame is None:
                return UNDEFINED
            checks.check_declared_arity(
                name, int(expected), frame.argc, frame.call_span
            )
            return UNDEFINED

        native("__rjsArityCheck", rjs_arity_check)


# ----------------------------------------------------------------------
# high-level entry points


def run_program(
    program: Program,
    mode: Mode | str = Mode.STRICT,
    io: IoPort | None = None,
    *,
    budget: int = DEFAULT_STEP_BUDGET,
    stop: StopToken | None = None,
    on_print: Callable[[str], None] | None = None,
    diagnostic_file_id: str | None = None,
) -> ExecOutcome:
    """Run a parsed program.

    In strict mode the static checks run first; any finding aborts the run
    before the first statement executes.
    """
    mode = Mode(mode) if isinstance(mode, str) else mode
    if mode is Mode.STRICT:
        from ..check.statics import static_check

        findings = static_check(program)
        if findings:
            return ExecOutcome(ExecStatus.ABORTED, [], findings[0], 0)
    interp = Interpreter(
        program,
        mode,
        io,
        budget=budget,
        stop=stop,
        on_print=on_print,
        diagnostic_file_id=diagnostic_file_id,
    )
    return interp.run()
