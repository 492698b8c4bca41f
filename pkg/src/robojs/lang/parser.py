"""Recursive-descent parser for the robot language.

The grammar is a small, fixed subset of JavaScript: let declarations,
assignments, expression statements, if/else-if/else, while, classic for,
function declarations, return, and blocks. Semicolons are required; there
is no automatic insertion. Member access is only allowed on the builtin
namespaces `robot` and `console`.

Parsing never throws for ordinary bad input: errors are collected as
diagnostics and the parser synchronizes at the next statement boundary so
one file can report several independent problems.
"""

from __future__ import annotations

from ..diagnostics import (
    Diagnostic,
    Phase,
    SYNTAX_ELSE_IF_HINT,
    SYNTAX_NOT_ROBOJS,
    SYNTAX_REDECLARATION,
    SYNTAX_RESERVED_NAME,
    SYNTAX_UNEXPECTED,
)
from ..span import SourceSpan
from .lexer import LexError, tokenize
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
from .tokens import ASSIGN_OPS, FOREIGN_KEYWORDS, Token, TokenKind

NAMESPACES = ("robot", "console")
RESERVED_PREFIX = "__rjs"

_FOREIGN_HINTS = {
    "var": 'use "let" to declare variables',
    "const": 'use "let" to declare variables',
    "break": "loops run until their condition is false",
    "continue": "loops run until their condition is false",
    "do": 'use a "while" loop',
    "switch": 'use "if" and "else if"',
    "null": "there is no null value in this language",
    "undefined": "leave a variable without a value by declaring it with no initializer",
    "typeof": "values are numbers, strings, and booleans",
    "new": "there are no objects in this language",
    "this": "there are no objects in this language",
    "class": "there are no classes in this language",
}

_BINARY_LEVELS: list[tuple[str, ...]] = [
    ("||",),
    ("&&",),
    ("===", "!==", "==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


class ParseError(Exception):
    """Internal signal used to unwind to the nearest statement boundary."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class Parser:
    def __init__(self, tokens: list[Token], file_id: str):
        self.tokens = tokens
        self.file_id = file_id
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []
        self.scopes: list[set[str]] = [set()]
        self.function_depth = 0

    # ------------------------------------------------------------------
    # token stream helpers

    def _peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def _check_punct(self, text: str) -> bool:
        return self._peek().is_punct(text)

    def _match_punct(self, text: str) -> Token | None:
        if self._check_punct(text):
            return self._advance()
        return None

    def _expect_punct(self, text: str, context: str) -> Token:
        tok = self._peek()
        if tok.is_punct(text):
            return self._advance()
        raise self._error(
            SYNTAX_UNEXPECTED,
            f'Expected "{text}" {context}, but found {self._describe(tok)}.',
            tok.span,
        )

    def _describe(self, tok: Token) -> str:
        if tok.kind is TokenKind.EOF:
            return "the end of the file"
        if tok.kind is TokenKind.STRING:
            return "a string"
        return f'"{tok.text}"'

    def _error(self, category: str, message: str, span: SourceSpan) -> ParseError:
        return ParseError(Diagnostic(Phase.SYNTAX, category, message, span))

    def _span(self, start: Token | SourceSpan, end: Token | SourceSpan) -> SourceSpan:
        a = start.span if isinstance(start, Token) else start
        b = end.span if isinstance(end, Token) else end
        return a.merge(b)

    # ------------------------------------------------------------------
    # scopes

    def _declare(self, name: str, span: SourceSpan) -> None:
        if name in NAMESPACES:
            raise self._error(
                SYNTAX_RESERVED_NAME,
                f'"{name}" is a builtin and cannot be redeclared.',
                span,
            )
        if name.startswith(RESERVED_PREFIX):
            raise self._error(
                SYNTAX_RESERVED_NAME,
                f'Names starting with "{RESERVED_PREFIX}" are reserved.',
                span,
            )
        if name in self.scopes[-1]:
            raise self._error(
                SYNTAX_REDECLARATION,
                f'"{name}" has already been declared in this scope.',
                span,
            )
        self.scopes[-1].add(name)

    # ------------------------------------------------------------------
    # program and statements

    def parse_program(self) -> Program:
        statements: list[Stmt] = []
        first = self._peek()
        while self._peek().kind is not TokenKind.EOF:
            stmt = self._statement_with_recovery()
            if stmt is not None:
                statements.append(stmt)
        span = (
            self._span(first, self.tokens[max(0, self.pos - 1)])
            if statements
            else SourceSpan(self.file_id, 1, 1, 1, 1)
        )
        return Program(tuple(statements), span, file_id=self.file_id)

    def _statement_with_recovery(self) -> Stmt | None:
        try:
            return self._statement()
        except ParseError as err:
            self.diagnostics.append(err.diagnostic)
            self._synchronize()
            return None

    def _synchronize(self) -> None:
        """Skip forward to the most likely start of the next statement."""
        depth = 0
        while True:
            tok = self._peek()
            if tok.kind is TokenKind.EOF:
                return
            if tok.is_punct(";") and depth == 0:
                self._advance()
                return
            if tok.is_punct("{"):
                depth += 1
            elif tok.is_punct("}"):
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and tok.kind is TokenKind.KEYWORD and tok.text in (
                "let", "if", "while", "for", "function", "return",
            ):
                return
            self._advance()

    def _statement(self) -> Stmt:
        tok = self._peek()
        if tok.kind is TokenKind.KEYWORD:
            if tok.text == "let":
                return self._let_declaration()
            if tok.text == "if":
                return self._if_statement()
            if tok.text == "while":
                return self._while_statement()
            if tok.text == "for":
                return self._for_statement()
            if tok.text == "function":
                return self._function_declaration()
            if tok.text == "return":
                return self._return_statement()
            if tok.text == "else":
                raise self._error(
                    SYNTAX_UNEXPECTED,
                    '"else" without a matching "if".',
                    tok.span,
                )
            if tok.text in FOREIGN_KEYWORDS:
                hint = _FOREIGN_HINTS.get(tok.text)
                extra = f" ({hint})" if hint else ""
                raise self._error(
                    SYNTAX_NOT_ROBOJS,
                    f'"{tok.text}" is not part of this language{extra}.',
                    tok.span,
                )
        if tok.is_punct("{"):
            return self._block()
        if tok.is_punct(";"):
            raise self._error(
                SYNTAX_UNEXPECTED, 'Statement expected before ";".', tok.span
            )
        expr = self._expression()
        semi = self._expect_punct(";", "after this statement")
        return ExprStmt(expr, self._span_of_expr(expr).merge(semi.span))

    def _span_of_expr(self, expr: Expr) -> SourceSpan:
        return expr.span

    def _let_declaration(self) -> LetDecl:
        let_tok = self._advance()
        name_tok = self._peek()
        if name_tok.kind is not TokenKind.IDENT:
            raise self._error(
                SYNTAX_UNEXPECTED,
                f'Expected a variable name after "let", but found {self._describe(name_tok)}.',
                name_tok.span,
            )
        self._advance()
        self._declare(name_tok.text, name_tok.span)
        init: Expr | None = None
        if self._match_punct("="):
            init = self._expression()
        semi = self._expect_punct(";", "after this declaration")
        return LetDecl(
            name_tok.text, name_tok.span, init, self._span(let_tok, semi)
        )

    def _if_statement(self) -> If:
        if_tok = self._advance()
        self._expect_punct("(", 'after "if"')
        condition = self._expression()
        self._expect_punct(")", "after the condition")
        then_branch = self._block_required("if")
        else_branch: Block | If | None = None
        end_span = then_branch.span
        if self._peek().is_keyword("else"):
            else_tok = self._advance()
            nxt = self._peek()
            if nxt.is_keyword("if"):
                else_branch = self._if_statement()
            elif nxt.is_punct("("):
                raise self._error(
                    SYNTAX_ELSE_IF_HINT,
                    '"else" cannot take a condition of its own; '
                    'write "else if (...)" to chain another test.',
                    self._span(else_tok, nxt),
                )
            else:
                else_branch = self._block_required("else")
            end_span = else_branch.span
        return If(condition, then_branch, else_branch, self._span(if_tok, end_span))

    def _while_statement(self) -> While:
        while_tok = self._advance()
        self._expect_punct("(", 'after "while"')
        condition = self._expression()
        self._expect_punct(")", "after the condition")
        body = self._block_required("while")
        return While(condition, body, self._span(while_tok, body.span))

    def _for_statement(self) -> For:
        for_tok = self._advance()
        self._expect_punct("(", 'after "for"')
        # The loop variable lives in a scope that wraps the whole loop.
        self.scopes.append(set())
        try:
            init: LetDecl | ExprStmt | None = None
            if self._match_punct(";"):
                pass
            elif self._peek().is_keyword("let"):
                init = self._let_declaration()
            else:
                expr = self._expression()
                semi = self._expect_punct(";", "after the loop initializer")
                init = ExprStmt(expr, expr.span.merge(semi.span))
            condition: Expr | None = None
            if not self._check_punct(";"):
                condition = self._expression()
            self._expect_punct(";", "after the loop condition")
            update: Expr | None = None
            if not self._check_punct(")"):
                update = self._expression()
            self._expect_punct(")", "after the loop header")
            body = self._block_required("for")
        finally:
            self.scopes.pop()
        return For(init, condition, update, body, self._span(for_tok, body.span))

    def _function_declaration(self) -> FuncDecl:
        fn_tok = self._advance()
        name_tok = self._peek()
        if name_tok.kind is not TokenKind.IDENT:
            raise self._error(
                SYNTAX_UNEXPECTED,
                f'Expected a function name, but found {self._describe(name_tok)}.',
                name_tok.span,
            )
        self._advance()
        self._declare(name_tok.text, name_tok.span)
        self._expect_punct("(", "after the function name")
        params: list[Ident] = []
        self.scopes.append(set())
        self.function_depth += 1
        try:
            if not self._check_punct(")"):
                while True:
                    p = self._peek()
                    if p.kind is not TokenKind.IDENT:
                        raise self._error(
                            SYNTAX_UNEXPECTED,
                            f"Expected a parameter name, but found {self._describe(p)}.",
                            p.span,
                        )
                    self._advance()
                    self._declare(p.text, p.span)
                    params.append(Ident(p.text, p.span))
                    if not self._match_punct(","):
                        break
            self._expect_punct(")", "after the parameters")
            body = self._block_required("function", new_scope=False)
        finally:
            self.function_depth -= 1
            self.scopes.pop()
        return FuncDecl(
            name_tok.text,
            name_tok.span,
            tuple(params),
            body,
            self._span(fn_tok, body.span),
        )

    def _return_statement(self) -> Return:
        ret_tok = self._advance()
        if self.function_depth == 0:
            raise self._error(
                SYNTAX_UNEXPECTED,
                '"return" can only be used inside a function.',
                ret_tok.span,
            )
        value: Expr | None = None
        if not self._check_punct(";"):
            value = self._expression()
        semi = self._expect_punct(";", 'after "return"')
        return Return(value, self._span(ret_tok, semi))

    def _block_required(self, context: str, new_scope: bool = True) -> Block:
        tok = self._peek()
        if not tok.is_punct("{"):
            raise self._error(
                SYNTAX_UNEXPECTED,
                f'Expected "{{" to start the {context} body, '
                f"but found {self._describe(tok)}.",
                tok.span,
            )
        return self._block(new_scope=new_scope)

    def _block(self, new_scope: bool = True) -> Block:
        open_tok = self._advance()
        if new_scope:
            self.scopes.append(set())
        try:
            statements: list[Stmt] = []
            while not self._check_punct("}"):
                if self._peek().kind is TokenKind.EOF:
                    raise self._error(
                        SYNTAX_UNEXPECTED,
                        'Expected "}" to close this block.',
                        open_tok.span,
                    )
                stmt = self._statement_with_recovery()
                if stmt is not None:
                    statements.append(stmt)
                elif self._check_punct("}") or self._peek().kind is TokenKind.EOF:
                    continue
        finally:
            if new_scope:
                self.scopes.pop()
        close_tok = self._advance()
        return Block(tuple(statements), self._span(open_tok, close_tok))

    # ------------------------------------------------------------------
    # expressions

    def _expression(self) -> Expr:
        return self._assignment()

    def _assignment(self) -> Expr:
        left = self._binary(0)
        tok = self._peek()
        if tok.kind is TokenKind.PUNCT and tok.text in ASSIGN_OPS:
            if not isinstance(left, Ident):
                raise self._error(
                    SYNTAX_NOT_ROBOJS,
                    "Only a variable can be assigned to.",
                    left.span,
                )
            op_tok = self._advance()
            value = self._assignment()
            return Assign(op_tok.text, left, value, self._span(left.span, value.span))
        return left

    def _binary(self, level: int) -> Expr:
        if level >= len(_BINARY_LEVELS):
            return self._unary()
        ops = _BINARY_LEVELS[level]
        left = self._binary(level + 1)
        while True:
            tok = self._peek()
            if tok.kind is TokenKind.PUNCT and tok.text in ops:
                self._advance()
                right = self._binary(level + 1)
                left = Binary(
                    tok.text, left, right, self._span(left.span, right.span)
                )
            else:
                return left

    def _unary(self) -> Expr:
        tok = self._peek()
        if tok.is_punct("-") or tok.is_punct("!"):
            self._advance()
            operand = self._unary()
            return Unary(tok.text, operand, self._span(tok, operand.span))
        if tok.is_punct("++") or tok.is_punct("--"):
            raise self._error(
                SYNTAX_NOT_ROBOJS,
                f'"{tok.text}" is not part of this language '
                f'(write "x = x {tok.text[0]} 1" instead).',
                tok.span,
            )
        return self._call()

    def _call(self) -> Expr:
        expr = self._primary()
        while True:
            if self._check_punct("("):
                if not isinstance(expr, (Ident, Member)):
                    raise self._error(
                        SYNTAX_NOT_ROBOJS,
                        "Only a function name can be called.",
                        self._peek().span,
                    )
                self._advance()
                args: list[Expr] = []
                if not self._check_punct(")"):
                    while True:
                        args.append(self._expression())
                        if not self._match_punct(","):
                            break
                close = self._expect_punct(")", "after the arguments")
                expr = Call(expr, tuple(args), self._span(expr.span, close.span))
            elif self._check_punct("."):
                dot = self._peek()
                if not (isinstance(expr, Ident) and expr.name in NAMESPACES):
                    raise self._error(
                        SYNTAX_NOT_ROBOJS,
                        'Member access is only available on "robot" and "console".',
                        dot.span,
                    )
                self._advance()
                name_tok = self._peek()
                if name_tok.kind is not TokenKind.IDENT:
                    raise self._error(
                        SYNTAX_UNEXPECTED,
                        f'Expected a member name after "{expr.name}.", '
                        f"but found {self._describe(name_tok)}.",
                        name_tok.span,
                    )
                self._advance()
                expr = Member(
                    expr.name,
                    name_tok.text,
                    self._span(expr.span, name_tok.span),
                    name_tok.span,
                )
            else:
                return expr

    def _primary(self) -> Expr:
        tok = self._peek()
        if tok.kind is TokenKind.NUMBER:
            self._advance()
            assert isinstance(tok.value, float)
            return NumberLit(tok.value, tok.span)
        if tok.kind is TokenKind.STRING:
            self._advance()
            assert isinstance(tok.value, str)
            return StringLit(tok.value, tok.span)
        if tok.is_keyword("true") or tok.is_keyword("false"):
            self._advance()
            return BoolLit(tok.text == "true", tok.span)
        if tok.kind is TokenKind.IDENT:
            self._advance()
            if tok.text in NAMESPACES and not self._check_punct("."):
                raise self._error(
                    SYNTAX_NOT_ROBOJS,
                    f'"{tok.text}" can only be used as "{tok.text}.<member>".',
                    tok.span,
                )
            return Ident(tok.text, tok.span)
        if tok.is_punct("("):
            self._advance()
            inner = self._expression()
            self._expect_punct(")", "to close this parenthesis")
            return inner
        if tok.kind is TokenKind.KEYWORD and tok.text in FOREIGN_KEYWORDS:
            hint = _FOREIGN_HINTS.get(tok.text)
            extra = f" ({hint})" if hint else ""
            raise self._error(
                SYNTAX_NOT_ROBOJS,
                f'"{tok.text}" is not part of this language{extra}.',
                tok.span,
            )
        raise self._error(
            SYNTAX_UNEXPECTED,
            f"Expected an expression, but found {self._describe(tok)}.",
            tok.span,
        )


def parse(source: str, file_id: str = "<program>") -> tuple[Program | None, list[Diagnostic]]:
    """Parse source text. Returns (program, diagnostics).

    The program is None whenever any diagnostics were produced, so a
    non-None result is always safe to check and execute.
    """
    try:
        tokens = tokenize(source, file_id)
    except LexError as err:
        return None, [err.diagnostic]
    parser = Parser(tokens, file_id)
    program = parser.parse_program()
    if parser.diagnostics:
        return None, parser.diagnostics
    return program, []


def check_syntax(source: str, file_id: str = "<program>") -> list[Diagnostic]:
    """All syntax diagnostics for the source, empty when it parses cleanly."""
    _, diagnostics = parse(source, file_id)
    return diagnostics
