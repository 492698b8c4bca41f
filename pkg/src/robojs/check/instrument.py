"""Source-to-source instrumentation.

Rewrites a statically clean program so that every checked operation goes
through a named runtime check function (`__rjsGT`, `__rjsAdd`, ...). The
checks are native functions provided by the interpreter; each call site
carries the original source span as four number arguments, so failures
report the student's own location. The rewritten program is ordinary
source text in the same language: it parses with the normal parser and
runs under the permissive interpreter, where the injected checks
reproduce exactly what the strict interpreter would have done.

Checked sites:

- ordering comparisons and arithmetic (both operands must be numbers;
  `+` also accepts two strings),
- unary minus,
- every `if`/`while`/`for` condition (must be exactly true or false),
- every variable read (the value must not be undefined),
- member access on the builtin namespaces (the member must exist),
- every call (the callee must be a function with the right argument
  count; each function body also begins with an argument-count check).

`&&`, `||`, `!`, and `===`/`!==` are untouched: they accept any values,
with the same meaning in both modes. `==`/`!=` never reach this point
because the static checker rejects them.

A marker line at the top of the output prevents double instrumentation.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic
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
from ..lang.printer import print_program
from ..span import SourceSpan
from .statics import ArityTable, build_arity_table, static_check

MARKER = "__rjs_instrumented"

CHECK_BINARY = {
    "+": "__rjsAdd",
    "-": "__rjsSub",
    "*": "__rjsMul",
    "/": "__rjsDiv",
    "%": "__rjsMod",
    "<": "__rjsLT",
    "<=": "__rjsLE",
    ">": "__rjsGT",
    ">=": "__rjsGE",
}
SHORTHAND_OPS = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}


class AlreadyInstrumented(ValueError):
    pass


class NotStaticallyClean(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("program has static diagnostics and cannot be instrumented")
        self.diagnostics = diagnostics


def is_instrumented(program: Program) -> bool:
    if not program.statements:
        return False
    first = program.statements[0]
    return (
        isinstance(first, ExprStmt)
        and isinstance(first.expr, StringLit)
        and first.expr.value == MARKER
    )


def instrument(program: Program, arities: ArityTable | None = None) -> str:
    """Rewrite a parsed, statically clean program into checked source text."""
    if is_instrumented(program):
        raise AlreadyInstrumented("program is already instrumented")
    diagnostics = static_check(program)
    if diagnostics:
        raise NotStaticallyClean(diagnostics)
    if arities is None:
        arities = build_arity_table(program)
    rewriter = _Rewriter(arities)
    statements = [rewriter.marker(program.span)]
    statements.extend(rewriter.stmt(s) for s in program.statements)
    rewritten = Program(tuple(statements), program.span, file_id=program.file_id)
    return print_program(rewritten)


class _Rewriter:
    def __init__(self, arities: ArityTable):
        self.arities = arities

    # ------------------------------------------------------------------
    # node builders

    def marker(self, span: SourceSpan) -> Stmt:
        return ExprStmt(StringLit(MARKER, span), span)

    def _span_args(self, span: SourceSpan) -> list[Expr]:
        return [
            NumberLit(float(span.start_line), span),
            NumberLit(float(span.start_col), span),
            NumberLit(float(span.end_line), span),
            NumberLit(float(span.end_col), span),
        ]

    def _check_call(self, name: str, args: list[Expr], span: SourceSpan) -> Call:
        return Call(Ident(name, span), tuple(args), span)

    def _read(self, ident: Ident) -> Call:
        # The check looks the name up itself (in the environment at the
        # call site, which is the environment the identifier appeared in),
        # so a name that is unbound at run time still reports the original
        # location rather than failing inside the rewritten expression.
        return self._check_call(
            "__rjsRead",
            [StringLit(ident.name, ident.span), *self._span_args(ident.span)],
            ident.span,
        )

    # ------------------------------------------------------------------
    # statements

    def stmt(self, stmt: Stmt) -> Stmt:
        if isinstance(stmt, LetDecl):
            init = self.expr(stmt.init) if stmt.init is not None else None
            return LetDecl(stmt.name, stmt.name_span, init, stmt.span)
        if isinstance(stmt, ExprStmt):
            return ExprStmt(self.expr(stmt.expr), stmt.span)
        if isinstance(stmt, Block):
            return self.block(stmt)
        if isinstance(stmt, If):
            else_branch: Block | If | None
            if isinstance(stmt.else_branch, If):
                else_branch = self.stmt(stmt.else_branch)
            elif isinstance(stmt.else_branch, Block):
                else_branch = self.block(stmt.else_branch)
            else:
                else_branch = None
            return If(
                self.condition(stmt.condition),
                self.block(stmt.then_branch),
                else_branch,
                stmt.span,
            )
        if isinstance(stmt, While):
            return While(
                self.condition(stmt.condition), self.block(stmt.body), stmt.span
            )
        if isinstance(stmt, For):
            init: LetDecl | ExprStmt | None
            if isinstance(stmt.init, LetDecl):
                init = self.stmt(stmt.init)
            elif isinstance(stmt.init, ExprStmt):
                init = ExprStmt(self.expr(stmt.init.expr), stmt.init.span)
            else:
                init = None
            condition = (
                self.condition(stmt.condition) if stmt.condition is not None else None
            )
            update = self.expr(stmt.update) if stmt.update is not None else None
            return For(init, condition, update, self.block(stmt.body), stmt.span)
        if isinstance(stmt, FuncDecl):
            prologue = ExprStmt(
                self._check_call(
                    "__rjsArityCheck",
                    [
                        StringLit(stmt.name, stmt.name_span),
                        NumberLit(float(len(stmt.params)), stmt.name_span),
                    ],
                    stmt.name_span,
                ),
                stmt.name_span,
            )
            body = self.block(stmt.body)
            body = Block((prologue, *body.statements), body.span)
            return FuncDecl(stmt.name, stmt.name_span, stmt.params, body, stmt.span)
        if isinstance(stmt, Return):
            value = self.expr(stmt.value) if stmt.value is not None else None
            return Return(value, stmt.span)
        raise TypeError(f"unknown statement {stmt!r}")

    def block(self, block: Block) -> Block:
        return Block(tuple(self.stmt(s) for s in block.statements), block.span)

    def condition(self, expr: Expr) -> Expr:
        is_assign = isinstance(expr, Assign)
        return self._check_call(
            "__rjsCond",
            [self.expr(expr), BoolLit(is_assign, expr.span), *self._span_args(expr.span)],
            expr.span,
        )

    # ------------------------------------------------------------------
    # expressions

    def expr(self, expr: Expr) -> Expr:
        if isinstance(expr, (NumberLit, StringLit, BoolLit)):
            return expr
        if isinstance(expr, Ident):
            return self._read(expr)
        if isinstance(expr, Member):
            return self._check_call(
                "__rjsMember",
                [
                    StringLit(expr.namespace, expr.span),
                    StringLit(expr.name, expr.name_span),
                    *self._span_args(expr.span),
                ],
                expr.span,
            )
        if isinstance(expr, Unary):
            operand = self.expr(expr.operand)
            if expr.op == "-":
                return self._check_call(
                    "__rjsNeg", [operand, *self._span_args(expr.span)], expr.span
                )
            return Unary(expr.op, operand, expr.span)
        if isinstance(expr, Binary):
            left = self.expr(expr.left)
            right = self.expr(expr.right)
            checker = CHECK_BINARY.get(expr.op)
            if checker is None:
                return Binary(expr.op, left, right, expr.span)
            return self._check_call(
                checker, [left, right, *self._span_args(expr.span)], expr.span
            )
        if isinstance(expr, Assign):
            if expr.op == "=":
                return Assign("=", expr.target, self.expr(expr.value), expr.span)
            base = SHORTHAND_OPS[expr.op]
            combined = self._check_call(
                CHECK_BINARY[base],
                [
                    self._read(expr.target),
                    self.expr(expr.value),
                    *self._span_args(expr.span),
                ],
                expr.span,
            )
            return Assign("=", expr.target, combined, expr.span)
        if isinstance(expr, Call):
            args = [self.expr(a) for a in expr.args]
            if isinstance(expr.callee, Member):
                return self._check_call(
                    "__rjsCallMember",
                    [
                        StringLit(expr.callee.namespace, expr.callee.span),
                        StringLit(expr.callee.name, expr.callee.name_span),
                        *self._span_args(expr.span),
                        *args,
                    ],
                    expr.span,
                )
            return self._check_call(
                "__rjsCall",
                [
                    self._read(expr.callee),
                    StringLit(expr.callee.name, expr.callee.span),
                    *self._span_args(expr.span),
                    *args,
                ],
                expr.span,
            )
        raise TypeError(f"unknown expression {expr!r}")
