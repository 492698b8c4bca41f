"""Syntax tree nodes. Every node carries the span of its source text.

Structural equality (used by the pretty-print round-trip tests) compares
node shapes and literal values while ignoring spans.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Union

from ..span import SourceSpan


@dataclass(frozen=True)
class Node:
    pass


# ----------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class NumberLit(Node):
    value: float
    span: SourceSpan


@dataclass(frozen=True)
class StringLit(Node):
    value: str
    span: SourceSpan


@dataclass(frozen=True)
class BoolLit(Node):
    value: bool
    span: SourceSpan


@dataclass(frozen=True)
class Ident(Node):
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class Member(Node):
    """Access to a member of one of the builtin namespaces (robot, console)."""

    namespace: str
    name: str
    span: SourceSpan
    name_span: SourceSpan


@dataclass(frozen=True)
class Unary(Node):
    op: str  # "-" or "!"
    operand: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Expr
    right: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Assign(Node):
    """Assignment, usable as a statement or as an expression."""

    op: str  # "=", "+=", "-=", "*=", "/=", "%="
    target: Ident
    value: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Call(Node):
    callee: Union[Ident, Member]
    args: tuple[Expr, ...]
    span: SourceSpan


Expr = Union[NumberLit, StringLit, BoolLit, Ident, Member, Unary, Binary, Assign, Call]


# ----------------------------------------------------------------------
# statements


@dataclass(frozen=True)
class LetDecl(Node):
    name: str
    name_span: SourceSpan
    init: Expr | None
    span: SourceSpan


@dataclass(frozen=True)
class ExprStmt(Node):
    expr: Expr
    span: SourceSpan


@dataclass(frozen=True)
class Block(Node):
    statements: tuple[Stmt, ...]
    span: SourceSpan


@dataclass(frozen=True)
class If(Node):
    condition: Expr
    then_branch: Block
    else_branch: Union[Block, "If", None]
    span: SourceSpan


@dataclass(frozen=True)
class While(Node):
    condition: Expr
    body: Block
    span: SourceSpan


@dataclass(frozen=True)
class For(Node):
    init: Union[LetDecl, ExprStmt, None]
    condition: Expr | None
    update: Expr | None
    body: Block
    span: SourceSpan


@dataclass(frozen=True)
class FuncDecl(Node):
    name: str
    name_span: SourceSpan
    params: tuple[Ident, ...]
    body: Block
    span: SourceSpan


@dataclass(frozen=True)
class Return(Node):
    value: Expr | None
    span: SourceSpan


Stmt = Union[LetDecl, ExprStmt, Block, If, While, For, FuncDecl, Return]


@dataclass(frozen=True)
class Program(Node):
    statements: tuple[Stmt, ...]
    span: SourceSpan
    file_id: str = "<program>"


# ----------------------------------------------------------------------
# structural helpers


def same_shape(a: object, b: object) -> bool:
    """Span-insensitive structural equality between two nodes or values."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Node):
        for f in fields(a):
            if f.name in ("span", "name_span", "file_id"):
                continue
            if not same_shape(getattr(a, f.name), getattr(b, f.name)):
                return False
        return True
    if isinstance(a, tuple):
        assert isinstance(b, tuple)
        return len(a) == len(b) and all(same_shape(x, y) for x, y in zip(a, b))
    if isinstance(a, float):
        assert isinstance(b, float)
        return (a != a and b != b) or a == b
    return a == b


def walk(node: object):
    """Yield node and all of its descendants, in syntax order."""
    if isinstance(node, Node):
        yield node
        for f in fields(node):
            if f.name in ("span", "name_span"):
                continue
            yield from walk(getattr(node, f.name))
    elif isinstance(node, tuple):
        for item in node:
            yield from walk(item)
