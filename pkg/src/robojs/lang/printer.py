"""Canonical pretty-printer.

Printing a program and re-parsing it yields a structurally identical tree;
the instrumenter relies on this to emit rewritten programs as plain source.
"""

from __future__ import annotations

from ..jsnum import format_number
from .nodes import (
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

_PRECEDENCE = {
    "=": 1, "+=": 1, "-=": 1, "*=": 1, "/=": 1, "%=": 1,
    "||": 2,
    "&&": 3,
    "===": 4, "!==": 4, "==": 4, "!=": 4,
    "<": 5, "<=": 5, ">": 5, ">=": 5,
    "+": 6, "-": 6,
    "*": 7, "/": 7, "%": 7,
}
_UNARY_LEVEL = 8
_ATOM_LEVEL = 9


def print_program(program: Program) -> str:
    lines: list[str] = []
    for stmt in program.statements:
        _print_stmt(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def print_expr(expr: Expr) -> str:
    return _expr(expr)


def escape_string(value: str) -> str:
    out = ['"']
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _print_stmt(stmt: Stmt, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(stmt, LetDecl):
        if stmt.init is None:
            lines.append(f"{pad}let {stmt.name};")
        else:
            lines.append(f"{pad}let {stmt.name} = {_expr(stmt.init)};")
    elif isinstance(stmt, ExprStmt):
        lines.append(f"{pad}{_expr(stmt.expr)};")
    elif isinstance(stmt, Block):
        lines.append(f"{pad}{{")
        for inner in stmt.statements:
            _print_stmt(inner, indent + 1, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, If):
        lines.append(f"{pad}if ({_expr(stmt.condition)}) {{")
        _print_branch(stmt.then_branch, indent, lines)
        node = stmt.else_branch
        while isinstance(node, If):
            lines.append(f"{pad}}} else if ({_expr(node.condition)}) {{")
            _print_branch(node.then_branch, indent, lines)
            node = node.else_branch
        if node is not None:
            lines.append(f"{pad}}} else {{")
            _print_branch(node, indent, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, While):
        lines.append(f"{pad}while ({_expr(stmt.condition)}) {{")
        _print_branch(stmt.body, indent, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, For):
        if stmt.init is None:
            init = ""
        elif isinstance(stmt.init, LetDecl):
            init = f"let {stmt.init.name}" + (
                f" = {_expr(stmt.init.init)}" if stmt.init.init is not None else ""
            )
        else:
            init = _expr(stmt.init.expr)
        cond = _expr(stmt.condition) if stmt.condition is not None else ""
        update = _expr(stmt.update) if stmt.update is not None else ""
        lines.append(f"{pad}for ({init}; {cond}; {update}) {{")
        _print_branch(stmt.body, indent, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, FuncDecl):
        params = ", ".join(p.name for p in stmt.params)
        lines.append(f"{pad}function {stmt.name}({params}) {{")
        _print_branch(stmt.body, indent, lines)
        lines.append(f"{pad}}}")
    elif isinstance(stmt, Return):
        if stmt.value is None:
            lines.append(f"{pad}return;")
        else:
            lines.append(f"{pad}return {_expr(stmt.value)};")
    else:
        raise TypeError(f"unknown statement {stmt!r}")


def _print_branch(block: Block, indent: int, lines: list[str]) -> None:
    for inner in block.statements:
        _print_stmt(inner, indent + 1, lines)


def _expr(expr: Expr, parent_level: int = 0, right_side: bool = False) -> str:
    text, level = _render(expr)
    if level < parent_level or (level == parent_level and right_side):
        return f"({text})"
    return text


def _render(expr: Expr) -> tuple[str, int]:
    if isinstance(expr, NumberLit):
        return format_number(expr.value), _ATOM_LEVEL
    if isinstance(expr, StringLit):
        return escape_string(expr.value), _ATOM_LEVEL
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false", _ATOM_LEVEL
    if isinstance(expr, Ident):
        return expr.name, _ATOM_LEVEL
    if isinstance(expr, Member):
        return f"{expr.namespace}.{expr.name}", _ATOM_LEVEL
    if isinstance(expr, Unary):
        operand = _expr(expr.operand, _UNARY_LEVEL)
        if isinstance(expr.operand, Unary):
            operand = f"({_expr(expr.operand)})"
        return f"{expr.op}{operand}", _UNARY_LEVEL
    if isinstance(expr, Binary):
        level = _PRECEDENCE[expr.op]
        left = _expr(expr.left, level)
        right = _expr(expr.right, level, right_side=True)
        return f"{left} {expr.op} {right}", level
    if isinstance(expr, Assign):
        value = _expr(expr.value, _PRECEDENCE[expr.op])
        return f"{expr.target.name} {expr.op} {value}", _PRECEDENCE[expr.op]
    if isinstance(expr, Call):
        callee, _ = _render(expr.callee)
        args = ", ".join(_expr(a) for a in expr.args)
        return f"{callee}({args})", _ATOM_LEVEL
    raise TypeError(f"unknown expression {expr!r}")
