"""Static checks that run before a program is executed or instrumented.

These catch the mistakes that are decidable from the tree alone:

- `==` and `!=` anywhere (the loose comparison pitfall),
- ordering comparisons with a literal operand that is not a number,
- calls with the wrong argument count when the callee's arity is known
  (builtin members, and names that resolve to a function declaration),
- identifiers that do not resolve to any declaration.

Conditions that are assignments are deliberately not rejected here: they
are legal when the assigned value is a boolean, which only execution can
see.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..api.manifest import lookup
from ..diagnostics import (
    CheckCategory,
    Diagnostic,
    Phase,
    STATIC_UNKNOWN_IDENTIFIER,
    msg_arity,
    msg_compare_numbers,
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

ORDERING_OPS = ("<", "<=", ">", ">=")
LOOSE_OPS = ("==", "!=")


@dataclass
class ArityTable:
    """Known argument counts: builtin members plus user function declarations."""

    builtins: dict[str, int | None] = field(default_factory=dict)
    functions: dict[str, int] = field(default_factory=dict)

    @staticmethod
    def for_program(program: Program) -> ArityTable:
        return build_arity_table(program)


def build_arity_table(program: Program) -> ArityTable:
    from ..api.manifest import api_catalog
    from ..lang.nodes import walk

    table = ArityTable()
    for entry in api_catalog():
        table.builtins[entry.full_name] = entry.arity
    for node in walk(program):
        if isinstance(node, FuncDecl) and node.name not in table.functions:
            table.functions[node.name] = len(node.params)
    return table


class _Scope:
    def __init__(self, parent: _Scope | None = None):
        self.parent = parent
        self.bindings: dict[str, FuncDecl | None] = {}

    def declare(self, name: str, func: FuncDecl | None = None) -> None:
        self.bindings[name] = func

    def resolve(self, name: str) -> tuple[bool, FuncDecl | None]:
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.bindings:
                return True, scope.bindings[name]
            scope = scope.parent
        return False, None


class _Checker:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def report(self, category: str, message: str, span) -> None:
        self.diagnostics.append(Diagnostic(Phase.STATIC, category, message, span))

    # ------------------------------------------------------------------

    def check_block(self, statements: tuple[Stmt, ...], scope: _Scope) -> None:
        # Declarations are visible throughout their block: functions are
        # hoisted, and use-before-let is caught at run time, not here.
        for stmt in statements:
            if isinstance(stmt, LetDecl):
                scope.declare(stmt.name)
            elif isinstance(stmt, FuncDecl):
                scope.declare(stmt.name, stmt)
        for stmt in statements:
            self.check_stmt(stmt, scope)

    def check_stmt(self, stmt: Stmt, scope: _Scope) -> None:
        if isinstance(stmt, LetDecl):
            if stmt.init is not None:
                self.check_expr(stmt.init, scope)
        elif isinstance(stmt, ExprStmt):
            self.check_expr(stmt.expr, scope)
        elif isinstance(stmt, Block):
            self.check_block(stmt.statements, _Scope(scope))
        elif isinstance(stmt, If):
            self.check_expr(stmt.condition, scope)
            self.check_block(stmt.then_branch.statements, _Scope(scope))
            if isinstance(stmt.else_branch, If):
                self.check_stmt(stmt.else_branch, scope)
            elif isinstance(stmt.else_branch, Block):
                self.check_block(stmt.else_branch.statements, _Scope(scope))
        elif isinstance(stmt, While):
            self.check_expr(stmt.condition, scope)
            self.check_block(stmt.body.statements, _Scope(scope))
        elif isinstance(stmt, For):
            header = _Scope(scope)
            if isinstance(stmt.init, LetDecl):
                header.declare(stmt.init.name)
                if stmt.init.init is not None:
                    self.check_expr(stmt.init.init, header)
            elif isinstance(stmt.init, ExprStmt):
                self.check_expr(stmt.init.expr, header)
            if stmt.condition is not None:
                self.check_expr(stmt.condition, header)
            if stmt.update is not None:
                self.check_expr(stmt.update, header)
            self.check_block(stmt.body.statements, _Scope(header))
        elif isinstance(stmt, FuncDecl):
            inner = _Scope(scope)
            for param in stmt.params:
                inner.declare(param.name)
            self.check_block(stmt.body.statements, inner)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                self.check_expr(stmt.value, scope)

    # ------------------------------------------------------------------

    def check_expr(self, expr: Expr, scope: _Scope) -> None:
        if isinstance(expr, (NumberLit, StringLit, BoolLit, Member)):
            return
        if isinstance(expr, Ident):
            found, _ = scope.resolve(expr.name)
            if not found:
                self.report(
                    STATIC_UNKNOWN_IDENTIFIER,
                    msg_not_defined(expr.name),
                    expr.span,
                )
            return
        if isinstance(expr, Unary):
            self.check_expr(expr.operand, scope)
            return
        if isinstance(expr, Binary):
            if expr.op in LOOSE_OPS:
                self.report(
                    CheckCategory.LOOSE_COMPARISON.value,
                    msg_loose(expr.op),
                    expr.span,
                )
            elif expr.op in ORDERING_OPS:
                if self._non_number_literal(expr.left) or self._non_number_literal(
                    expr.right
                ):
                    self.report(
                        CheckCategory.OP_TYPE_MISMATCH.value,
                        msg_compare_numbers(expr.op),
                        expr.span,
                    )
            self.check_expr(expr.left, scope)
            self.check_expr(expr.right, scope)
            return
        if isinstance(expr, Assign):
            found, _ = scope.resolve(expr.target.name)
            if not found:
                self.report(
                    STATIC_UNKNOWN_IDENTIFIER,
                    msg_not_defined(expr.target.name)
                    + ' Declare it first with "let".',
                    expr.target.span,
                )
            self.check_expr(expr.value, scope)
            return
        if isinstance(expr, Call):
            self._check_call(expr, scope)
            return
        raise TypeError(f"unknown expression {expr!r}")

    def _check_call(self, call: Call, scope: _Scope) -> None:
        callee = call.callee
        if isinstance(callee, Member):
            entry = lookup(callee.namespace, callee.name)
            if entry is not None and not entry.variadic:
                if len(call.args) != entry.arity:
                    self.report(
                        CheckCategory.ARITY_MISMATCH.value,
                        msg_arity(entry.full_name, entry.arity, len(call.args)),
                        call.span,
                    )
            # Unknown members stay a runtime concern so both execution modes
            # reach them the same way.
        else:
            found, func = scope.resolve(callee.name)
            if not found:
                self.report(
                    STATIC_UNKNOWN_IDENTIFIER,
                    msg_not_defined(callee.name),
                    callee.span,
                )
            elif func is not None and len(call.args) != len(func.params):
                self.report(
                    CheckCategory.ARITY_MISMATCH.value,
                    msg_arity(func.name, len(func.params), len(call.args)),
                    call.span,
                )
        for arg in call.args:
            self.check_expr(arg, scope)

    @staticmethod
    def _non_number_literal(expr: Expr) -> bool:
        return isinstance(expr, (StringLit, BoolLit))


def static_check(program: Program) -> list[Diagnostic]:
    """All static diagnostics for a parsed program, in source order."""
    checker = _Checker()
    checker.check_block(program.statements, _Scope())
    checker.diagnostics.sort(key=lambda d: d.span.position())
    return checker.diagnostics
