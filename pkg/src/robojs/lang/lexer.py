"""Hand-written lexer with 1-based line/column tracking."""

from __future__ import annotations

from ..diagnostics import (
    Diagnostic,
    Phase,
    SYNTAX_BAD_CHAR,
    SYNTAX_BAD_ESCAPE,
    SYNTAX_UNEXPECTED,
    SYNTAX_UNTERMINATED_STRING,
)
from ..span import SourceSpan
from .tokens import FOREIGN_KEYWORDS, KEYWORDS, PUNCTUATION, Token, TokenKind

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"'}


class LexError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class Lexer:
    """Turns source text into a token list ending with an EOF token."""

    def __init__(self, source: str, file_id: str = "<program>"):
        self.source = source
        self.file_id = file_id
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, category: str, message: str, line: int, col: int) -> LexError:
        span = SourceSpan(self.file_id, line, col, line, col)
        return LexError(Diagnostic(Phase.SYNTAX, category, message, span))

    def tokenize(self) -> list[Token]:
        tokens: list[Token] = []
        while True:
            self._skip_trivia()
            if self.pos >= len(self.source):
                here = SourceSpan(self.file_id, self.line, self.col, self.line, self.col)
                tokens.append(Token(TokenKind.EOF, "", here))
                return tokens
            tokens.append(self._next_token())

    # ------------------------------------------------------------------
    # scanning helpers

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.source[i] if i < len(self.source) else ""

    def _advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _skip_trivia(self) -> None:
        while self.pos < len(self.source):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.source) and self._peek() != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                line, col = self.line, self.col
                self._advance()
                self._advance()
                while True:
                    if self.pos >= len(self.source):
                        raise self.error(
                            SYNTAX_UNEXPECTED, "Comment is never closed.", line, col
                        )
                    if self._peek() == "*" and self._peek(1) == "/":
                        self._advance()
                        self._advance()
                        break
                    self._advance()
            else:
                return

    def _span_from(self, line: int, col: int) -> SourceSpan:
        # End position is the column of the last consumed character.
        end_line, end_col = self.line, self.col - 1
        if end_col < 1:
            end_line, end_col = line, col
        return SourceSpan(self.file_id, line, col, end_line, end_col)

    # ------------------------------------------------------------------
    # token scanners

    def _next_token(self) -> Token:
        line, col = self.line, self.col
        ch = self._peek()
        if ch.isdigit() or (ch == "." and self._peek(1).isdigit()):
            return self._number(line, col)
        if ch.isalpha() or ch == "_":
            return self._word(line, col)
        if ch in "'\"":
            return self._string(line, col)
        for punct in PUNCTUATION:
            if self.source.startswith(punct, self.pos):
                for _ in punct:
                    self._advance()
                return Token(TokenKind.PUNCT, punct, self._span_from(line, col))
        raise self.error(
            SYNTAX_BAD_CHAR, f"Unsupported character {ch!r}.", line, col
        )

    def _number(self, line: int, col: int) -> Token:
        text = []
        while self._peek().isdigit():
            text.append(self._advance())
        if self._peek() == ".":
            text.append(self._advance())
            while self._peek().isdigit():
                text.append(self._advance())
        if self._peek() != "" and self._peek() in "eE":
            exp = [self._advance()]
            if self._peek() != "" and self._peek() in "+-":
                exp.append(self._advance())
            if self._peek().isdigit():
                while self._peek().isdigit():
                    exp.append(self._advance())
                text.extend(exp)
            else:
                # Not an exponent after all; rewind is impossible mid-line, so
                # report it as a malformed number instead.
                raise self.error(
                    SYNTAX_UNEXPECTED, "Malformed number exponent.", self.line, self.col
                )
        lexeme = "".join(text)
        return Token(
            TokenKind.NUMBER, lexeme, self._span_from(line, col), value=float(lexeme)
        )

    def _word(self, line: int, col: int) -> Token:
        text = []
        while self._peek().isalnum() or self._peek() == "_":
            text.append(self._advance())
        word = "".join(text)
        span = self._span_from(line, col)
        if word in KEYWORDS or word in FOREIGN_KEYWORDS:
            return Token(TokenKind.KEYWORD, word, span)
        return Token(TokenKind.IDENT, word, span)

    def _string(self, line: int, col: int) -> Token:
        quote = self._advance()
        chars = []
        while True:
            if self.pos >= len(self.source) or self._peek() == "\n":
                raise self.error(
                    SYNTAX_UNTERMINATED_STRING, "String is never closed.", line, col
                )
            ch = self._advance()
            if ch == quote:
                break
            if ch == "\\":
                if self.pos >= len(self.source):
                    raise self.error(
                        SYNTAX_UNTERMINATED_STRING, "String is never closed.", line, col
                    )
                esc = self._advance()
                if esc not in _ESCAPES:
                    raise self.error(
                        SYNTAX_BAD_ESCAPE,
                        f"Unsupported escape \\{esc} in string.",
                        self.line,
                        self.col - 2,
                    )
                chars.append(_ESCAPES[esc])
            else:
                chars.append(ch)
        value = "".join(chars)
        span = self._span_from(line, col)
        return Token(TokenKind.STRING, value, span, value=value)


def tokenize(source: str, file_id: str = "<program>") -> list[Token]:
    return Lexer(source, file_id).tokenize()
