"""Conservative syntax-level estimates of which checks would fire.

The analyzer never executes programs.  Each rule flags a revision only when
the corresponding runtime check is certain to fire on the flagged
expression, judged from the syntax alone:

* ``loose-comparison`` — any ``==`` or ``!=``.
* ``arity-mismatch`` — calls of known-arity callables (the robot/console
  catalog, or user functions resolved lexically) with the wrong argument
  count.  Variadic callables are skipped.
* ``missing-member`` — ``robot.…``/``console.…`` names not in the catalog.
* ``uninitialized-variable`` — ``let x;`` followed by a read that executes
  before any possible assignment.  The scan is per block and straight-line:
  a call anywhere acts as a barrier (a callee could assign any visible
  variable), assignments inside conditional bodies untrack the variable,
  and reads inside conditional bodies are never flagged for variables
  declared outside them.
* ``conditional-assignment`` — an ``if``/``while``/``for`` condition that is
  an assignment whose right side is a number or string literal (an
  assignment of a boolean literal is the sanctioned flag idiom).
* ``op-type-mismatch`` — arithmetic/ordering operators with literal operands
  that can never satisfy the number/number (or string/string for ``+``)
  requirement.
* ``non-boolean-condition`` — a condition that is a bare number or string
  literal.
* ``function-compared-as-value`` — an ordering comparison with an operand
  that is certainly a function (a known robot/console member, or a name
  that resolves to a function declaration).

Anything the rules are unsure about is not flagged, so the per-category
counts are lower bounds.  Reads of names never declared anywhere are the
host language's own reference errors, not one of the checks, and are not
counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..api.manifest import API_ENTRIES
from ..diagnostics import CheckCategory
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
from ..lang.parser import parse
from ..span import SourceSpan

_ORDERING = ("<", "<=", ">", ">=")
_ARITH = ("-", "*", "/", "%")


class ApiView:
    """Names and arities of the builtin callables, as the rules see them.

    Built from the running catalog by default; `from_manifest` accepts the
    JSON document the `robojs manifest` command prints, so a corpus can be
    analyzed against the exact API of the runtime that collected it.
    Arity ``None`` means variadic.
    """

    def __init__(self, members: Mapping[str, Mapping[str, int | None]]):
        self._members = {ns: dict(names) for ns, names in members.items()}

    @classmethod
    def builtin(cls) -> "ApiView":
        members: dict[str, dict[str, int | None]] = {}
        for entry in API_ENTRIES:
            members.setdefault(entry.namespace, {})[entry.name] = entry.arity
        return cls(members)

    @classmethod
    def from_manifest(cls, doc: Mapping) -> "ApiView":
        members: dict[str, dict[str, int | None]] = {}
        for entry in doc["entries"]:
            arity = None if entry.get("variadic") else len(entry["params"])
            members.setdefault(entry["namespace"], {})[entry["name"]] = arity
        return cls(members)

    def contains(self, namespace: str, name: str) -> bool:
        return name in self._members.get(namespace, {})

    def arity(self, namespace: str, name: str) -> int | None:
        return self._members.get(namespace, {}).get(name)

    def member_names(self, namespace: str) -> Iterable[str]:
        return self._members.get(namespace, {}).keys()


@dataclass(frozen=True)
class Finding:
    category: str
    span: SourceSpan
    detail: str


@dataclass
class RevisionAnalysis:
    syntax_error: bool
    findings: list[Finding]

    @property
    def categories(self) -> set[str]:
        return {finding.category for finding in self.findings}


@dataclass
class _Scope:
    parent: "_Scope | None" = None
    # name -> FuncDecl while the binding certainly still holds the function,
    # or None once the name has been reassigned.
    functions: dict[str, FuncDecl | None] = field(default_factory=dict)
    # name -> declaration site for `let x;` bindings that are certainly
    # still unset at the current scan position.
    unset: dict[str, SourceSpan] = field(default_factory=dict)
    # names declared here with a value (initialized lets, parameters).
    initialized: set[str] = field(default_factory=set)
    # names whose unset-reads may be flagged at the current position (a
    # subset of `unset`; reads inside conditional bodies apply effects but
    # never flag variables from outer scopes).
    flaggable: set[str] = field(default_factory=set)

    def declares(self, name: str) -> bool:
        return (
            name in self.functions or name in self.unset or name in self.initialized
        )

    def resolve_function(self, name: str) -> FuncDecl | None:
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.functions:
                return scope.functions[name]
            if scope.declares(name):
                return None
            scope = scope.parent
        return None

    def chain(self) -> list["_Scope"]:
        out = []
        scope: _Scope | None = self
        while scope is not None:
            out.append(scope)
            scope = scope.parent
        return out


class _Analyzer:
    def __init__(self, api: ApiView | None = None) -> None:
        self.api = api or ApiView.builtin()
        self.findings: list[Finding] = []

    def flag(self, category: CheckCategory, span: SourceSpan, detail: str) -> None:
        self.findings.append(Finding(category.value, span, detail))

    # -- statement scan ------------------------------------------------

    def walk_block(self, statements: tuple[Stmt, ...], scope: _Scope) -> None:
        for stmt in statements:
            if isinstance(stmt, FuncDecl):
                scope.functions[stmt.name] = stmt
        for stmt in statements:
            if self.walk_stmt(stmt, scope):
                break  # a return; the rest of the block cannot execute

    def walk_stmt(self, stmt: Stmt, scope: _Scope) -> bool:
        if isinstance(stmt, LetDecl):
            if stmt.init is not None:
                self.walk_expr(stmt.init, scope)
                scope.initialized.add(stmt.name)
            else:
                scope.unset[stmt.name] = stmt.name_span
                scope.flaggable.add(stmt.name)
            return False
        if isinstance(stmt, ExprStmt):
            self.walk_expr(stmt.expr, scope)
            return False
        if isinstance(stmt, If):
            self.check_condition(stmt.condition, scope)
            branch: Block | If | None = stmt
            while isinstance(branch, If):
                # Conditions of else-if arms are not certain to evaluate.
                if branch is not stmt:
                    self.effects_only_expr(branch.condition, scope)
                self.conditional_body(branch.then_branch.statements, scope)
                branch = branch.else_branch
            if branch is not None:
                self.conditional_body(branch.statements, scope)
            return False
        if isinstance(stmt, While):
            self.check_condition(stmt.condition, scope)
            self.conditional_body(stmt.body.statements, scope)
            return False
        if isinstance(stmt, For):
            if stmt.init is not None:
                self.walk_stmt(stmt.init, scope)
            if stmt.condition is not None:
                self.check_condition(stmt.condition, scope)
            self.conditional_body(stmt.body.statements, scope, extra_update=stmt.update)
            return False
        if isinstance(stmt, FuncDecl):
            self.function_body(stmt, scope)
            return False
        if isinstance(stmt, Return):
            if stmt.value is not None:
                self.walk_expr(stmt.value, scope)
            return True
        if isinstance(stmt, Block):
            child = _Scope(parent=scope)
            self.walk_block(stmt.statements, child)
            return False
        raise TypeError(f"unknown statement {stmt!r}")

    def conditional_body(
        self,
        statements: tuple[Stmt, ...],
        scope: _Scope,
        extra_update: Expr | None = None,
    ) -> None:
        """Scan a body that may or may not run: apply effects, flag only its
        own block-local declarations."""
        saved_flaggable = [set(s.flaggable) for s in scope.chain()]
        for s in scope.chain():
            s.flaggable.clear()
        child = _Scope(parent=scope)
        self.walk_block(statements, child)
        if extra_update is not None:
            self.walk_expr(extra_update, child)
        for s, saved in zip(scope.chain(), saved_flaggable):
            # Re-allow flagging only for names still certainly unset.
            s.flaggable = saved & set(s.unset)

    def function_body(self, decl: FuncDecl, scope: _Scope) -> None:
        """Scan a function body in isolation: its execution time is unknown,
        so it must not disturb the surrounding tracking state."""
        saved = [
            (dict(s.functions), dict(s.unset), set(s.initialized), set(s.flaggable))
            for s in scope.chain()
        ]
        for s in scope.chain():
            s.flaggable.clear()
        body_scope = _Scope(parent=scope)
        for param in decl.params:
            body_scope.initialized.add(param.name)
        self.walk_block(decl.body.statements, body_scope)
        for s, (functions, unset, initialized, flaggable) in zip(scope.chain(), saved):
            s.functions, s.unset, s.initialized, s.flaggable = (
                functions,
                unset,
                initialized,
                flaggable,
            )

    # -- expression scan -------------------------------------------------

    def effects_only_expr(self, expr: Expr, scope: _Scope) -> None:
        saved_flaggable = [set(s.flaggable) for s in scope.chain()]
        for s in scope.chain():
            s.flaggable.clear()
        self.walk_expr(expr, scope)
        for s, saved in zip(scope.chain(), saved_flaggable):
            s.flaggable = saved & set(s.unset)

    def check_condition(self, condition: Expr, scope: _Scope) -> None:
        if isinstance(condition, Assign):
            if condition.op == "=" and isinstance(condition.value, (NumberLit, StringLit)):
                self.flag(
                    CheckCategory.CONDITIONAL_ASSIGNMENT,
                    condition.span,
                    f'condition assigns "{condition.target.name}" a non-boolean',
                )
        elif isinstance(condition, (NumberLit, StringLit)):
            self.flag(
                CheckCategory.NON_BOOLEAN_CONDITION,
                condition.span,
                "condition is a non-boolean literal",
            )
        self.walk_expr(condition, scope)

    def _read(self, ident: Ident, scope: _Scope) -> None:
        for s in scope.chain():
            if ident.name in s.unset:
                if ident.name in s.flaggable:
                    self.flag(
                        CheckCategory.UNINITIALIZED_VARIABLE,
                        ident.span,
                        f'"{ident.name}" is read before it is assigned',
                    )
                return
            if s.declares(ident.name):
                return

    def _assigned(self, name: str, scope: _Scope) -> None:
        for s in scope.chain():
            if name in s.unset:
                del s.unset[name]
                s.flaggable.discard(name)
                return
            if name in s.functions:
                s.functions[name] = None
                return
            if name in s.initialized:
                return

    def _call_barrier(self, scope: _Scope) -> None:
        for s in scope.chain():
            s.unset.clear()
            s.flaggable.clear()

    def _is_function_operand(self, expr: Expr, scope: _Scope) -> bool:
        if isinstance(expr, Member):
            return self.api.contains(expr.namespace, expr.name)
        if isinstance(expr, Ident):
            return scope.resolve_function(expr.name) is not None
        return False

    def walk_expr(self, expr: Expr, scope: _Scope) -> None:
        if isinstance(expr, (NumberLit, StringLit, BoolLit)):
            return
        if isinstance(expr, Ident):
            self._read(expr, scope)
            return
        if isinstance(expr, Member):
            self._check_member(expr)
            return
        if isinstance(expr, Unary):
            if expr.op == "-" and isinstance(expr.operand, (StringLit, BoolLit)):
                self.flag(
                    CheckCategory.OP_TYPE_MISMATCH,
                    expr.span,
                    "unary minus on a non-number literal",
                )
            self.walk_expr(expr.operand, scope)
            return
        if isinstance(expr, Binary):
            self._check_binary(expr, scope)
            self.walk_expr(expr.left, scope)
            self.walk_expr(expr.right, scope)
            return
        if isinstance(expr, Assign):
            if expr.op != "=":
                self._read(expr.target, scope)
                self._check_shorthand(expr)
            self.walk_expr(expr.value, scope)
            self._assigned(expr.target.name, scope)
            return
        if isinstance(expr, Call):
            self._check_call(expr, scope)
            if isinstance(expr.callee, Ident):
                self._read(expr.callee, scope)
            for arg in expr.args:
                self.walk_expr(arg, scope)
            self._call_barrier(scope)
            return
        raise TypeError(f"unknown expression {expr!r}")

    # -- per-node rules --------------------------------------------------

    def _check_member(self, expr: Member) -> None:
        if not self.api.contains(expr.namespace, expr.name):
            known = ", ".join(sorted(self.api.member_names(expr.namespace)))
            self.flag(
                CheckCategory.MISSING_MEMBER,
                expr.span,
                f'"{expr.namespace}.{expr.name}" is not one of: {known}',
            )

    def _check_binary(self, expr: Binary, scope: _Scope) -> None:
        op = expr.op
        if op in ("==", "!="):
            self.flag(
                CheckCategory.LOOSE_COMPARISON,
                expr.span,
                f'"{op}" always trips the loose-comparison check',
            )
            return
        operands = (expr.left, expr.right)
        if op in _ORDERING:
            for operand in operands:
                if self._is_function_operand(operand, scope):
                    self.flag(
                        CheckCategory.FUNCTION_COMPARED_AS_VALUE,
                        expr.span,
                        "ordering comparison with a function operand",
                    )
                    return
            for operand in operands:
                if isinstance(operand, (StringLit, BoolLit)):
                    self.flag(
                        CheckCategory.OP_TYPE_MISMATCH,
                        expr.span,
                        f'"{op}" with a non-number literal operand',
                    )
                    return
            return
        if op in _ARITH:
            for operand in operands:
                if isinstance(operand, (StringLit, BoolLit)):
                    self.flag(
                        CheckCategory.OP_TYPE_MISMATCH,
                        expr.span,
                        f'"{op}" with a non-number literal operand',
                    )
                    return
            return
        if op == "+":
            if any(isinstance(o, BoolLit) for o in operands):
                self.flag(
                    CheckCategory.OP_TYPE_MISMATCH,
                    expr.span,
                    '"+" with a boolean literal operand',
                )
                return
            literal_kinds = {
                "number" if isinstance(o, NumberLit) else "string"
                for o in operands
                if isinstance(o, (NumberLit, StringLit))
            }
            if len(literal_kinds) == 2:
                self.flag(
                    CheckCategory.OP_TYPE_MISMATCH,
                    expr.span,
                    '"+" mixing a number literal and a string literal',
                )

    def _check_shorthand(self, expr: Assign) -> None:
        if expr.op in ("-=", "*=", "/=", "%=") and isinstance(
            expr.value, (StringLit, BoolLit)
        ):
            self.flag(
                CheckCategory.OP_TYPE_MISMATCH,
                expr.span,
                f'"{expr.op}" with a non-number literal',
            )

    def _check_call(self, expr: Call, scope: _Scope) -> None:
        callee = expr.callee
        if isinstance(callee, Member):
            if not self.api.contains(callee.namespace, callee.name):
                self._check_member(callee)
                return
            arity = self.api.arity(callee.namespace, callee.name)
            if arity is not None and arity != len(expr.args):
                self.flag(
                    CheckCategory.ARITY_MISMATCH,
                    expr.span,
                    f"{callee.namespace}.{callee.name} takes {arity} "
                    f"argument(s), called with {len(expr.args)}",
                )
            return
        decl = scope.resolve_function(callee.name)
        if decl is not None and len(decl.params) != len(expr.args):
            self.flag(
                CheckCategory.ARITY_MISMATCH,
                expr.span,
                f"{callee.name} takes {len(decl.params)} argument(s), "
                f"called with {len(expr.args)}",
            )


def analyze_program(program: Program, api: ApiView | None = None) -> list[Finding]:
    analyzer = _Analyzer(api)
    analyzer.walk_block(program.statements, _Scope())
    return analyzer.findings


def analyze_source(
    source: str, file_id: str = "<revision>", api: ApiView | None = None
) -> RevisionAnalysis:
    program, diagnostics = parse(source, file_id=file_id)
    if program is None or diagnostics:
        return RevisionAnalysis(syntax_error=True, findings=[])
    return RevisionAnalysis(syntax_error=False, findings=analyze_program(program, api))
