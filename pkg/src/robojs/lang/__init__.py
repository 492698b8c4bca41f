"""Lexer, parser, syntax tree, and pretty-printer for the robot language."""

from .lexer import tokenize
from .parser import NAMESPACES, RESERVED_PREFIX, check_syntax, parse
from .printer import escape_string, print_expr, print_program
from . import nodes

__all__ = [
    "tokenize",
    "parse",
    "check_syntax",
    "print_program",
    "print_expr",
    "escape_string",
    "nodes",
    "NAMESPACES",
    "RESERVED_PREFIX",
]
