"""Token stream behavior: kinds, values, spans, and lexical errors."""

import pytest

from robojs.lang.lexer import LexError, tokenize
from robojs.lang.tokens import TokenKind


def kinds(source):
    return [t.kind for t in tokenize(source)]


def texts(source):
    return [t.text for t in tokenize(source)[:-1]]  # drop EOF


class TestBasics:
    def test_empty_source_is_just_eof(self):
        tokens = tokenize("")
        assert [t.kind for t in tokens] == [TokenKind.EOF]

    def test_keywords_and_identifiers(self):
        tokens = tokenize("let x = while10;")
        assert tokens[0].kind is TokenKind.KEYWORD
        assert tokens[0].text == "let"
        assert tokens[1].kind is TokenKind.IDENT
        assert tokens[3].kind is TokenKind.IDENT  # while10 is a name
        assert tokens[3].text == "while10"

    def test_all_keywords(self):
        for word in ("let", "if", "else", "while", "for", "function", "return",
                     "true", "false"):
            token = tokenize(word)[0]
            assert token.kind is TokenKind.KEYWORD, word

    def test_punctuation(self):
        source = "( ) { } , ; ."
        expected = ["(", ")", "{", "}", ",", ";", "."]
        assert texts(source) == expected

    def test_operators_longest_match(self):
        assert texts("a === b") == ["a", "===", "b"]
        assert texts("a == b") == ["a", "==", "b"]
        assert texts("a <= b") == ["a", "<=", "b"]
        assert texts("a += 1") == ["a", "+=", "1"]
        assert texts("a && b || !c") == ["a", "&&", "b", "||", "!", "c"]

    def test_line_comment_skipped(self):
        tokens = tokenize("let a = 1; // trailing words\nlet b = 2;")
        names = [t.text for t in tokens if t.kind is TokenKind.IDENT]
        assert names == ["a", "b"]

    def test_block_comment_skipped(self):
        tokens = tokenize("let a = /* 1 + 1 */ 2;")
        values = [t.value for t in tokens if t.kind is TokenKind.NUMBER]
        assert values == [2.0]


class TestNumbers:
    @pytest.mark.parametrize(
        "source,value",
        [("0", 0.0), ("42", 42.0), ("3.5", 3.5), ("0.25", 0.25),
         ("1e3", 1000.0), ("2.5e-2", 0.025), ("7E+1", 70.0)],
    )
    def test_number_values(self, source, value):
        token = tokenize(source)[0]
        assert token.kind is TokenKind.NUMBER
        assert token.value == value

    def test_number_at_end_of_input(self):
        # Numbers terminating the source must not run past the buffer.
        token = tokenize("x * 6")[-2]
        assert token.kind is TokenKind.NUMBER
        assert token.value == 6.0

    def test_float_at_end_of_input(self):
        token = tokenize("1.5")[0]
        assert token.value == 1.5

    @pytest.mark.parametrize("source", ["1e", "1e+", "2.5E-"])
    def test_malformed_exponent(self, source):
        with pytest.raises(LexError) as err:
            tokenize(source)
        assert err.value.diagnostic.category == "unexpected-token"


class TestStrings:
    def test_double_and_single_quotes(self):
        assert tokenize('"hi"')[0].value == "hi"
        assert tokenize("'hi'")[0].value == "hi"

    def test_escapes(self):
        assert tokenize(r'"a\nb"')[0].value == "a\nb"
        assert tokenize(r'"a\"b"')[0].value == 'a"b'
        assert tokenize(r'"a\\b"')[0].value == "a\\b"
        assert tokenize(r'"tab\there"')[0].value == "tab\there"

    def test_unterminated_string(self):
        with pytest.raises(LexError) as err:
            tokenize('"never closed')
        assert err.value.diagnostic.category == "unterminated-string"

    def test_newline_inside_string(self):
        with pytest.raises(LexError):
            tokenize('"line\nbreak"')


class TestSpans:
    def test_single_line_positions(self):
        tokens = tokenize("let abc = 5;")
        let_span = tokens[0].span
        assert (let_span.start_line, let_span.start_col) == (1, 1)
        name_span = tokens[1].span
        assert (name_span.start_line, name_span.start_col) == (1, 5)
        assert name_span.end_col == 7  # end positions are inclusive

    def test_multi_line_positions(self):
        tokens = tokenize("let a = 1;\nlet b = 2;")
        b_token = [t for t in tokens if t.text == "b"][0]
        assert b_token.span.start_line == 2
        assert b_token.span.start_col == 5

    def test_file_id_recorded(self):
        token = tokenize("x", "main.js")[0]
        assert token.span.file_id == "main.js"


class TestErrors:
    def test_unsupported_character(self):
        with pytest.raises(LexError) as err:
            tokenize("let a = 1 @ 2;")
        assert err.value.diagnostic.category == "unsupported-character"

    def test_error_span_points_at_offender(self):
        with pytest.raises(LexError) as err:
            tokenize("ab @")
        assert err.value.diagnostic.span.start_col == 4
