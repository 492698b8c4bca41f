"""Token kinds produced by the lexer."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..span import SourceSpan


class TokenKind(enum.Enum):
    NUMBER = "number"
    STRING = "string"
    IDENT = "ident"
    KEYWORD = "keyword"
    PUNCT = "punct"
    EOF = "eof"


KEYWORDS = frozenset(
    ["let", "if", "else", "while", "for", "function", "return", "true", "false"]
)

# JavaScript keywords that are not part of this language. The lexer still
# recognizes them so the parser can point at them with a useful message.
FOREIGN_KEYWORDS = frozenset(
    [
        "var", "const", "do", "switch", "case", "default", "break", "continue",
        "new", "this", "typeof", "null", "undefined", "class", "try", "catch",
        "finally", "throw", "of", "in", "instanceof", "delete", "void", "yield",
        "async", "await", "import", "export", "with", "debugger", "super",
    ]
)

PUNCTUATION = [
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "++", "--", "=>",
    "+", "-", "*", "/", "%", "<", ">", "=", "!",
    "(", ")", "{", "}", ",", ";", ".",
]

ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%="])


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan
    value: float | str | None = None

    def is_punct(self, text: str) -> bool:
        return self.kind is TokenKind.PUNCT and self.text == text

    def is_keyword(self, text: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text == text
