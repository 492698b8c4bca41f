"""Syntax-tree shapes, operator structure, error reporting, and the printer."""

import pytest

from robojs.lang import nodes
from robojs.lang.parser import check_syntax, parse
from robojs.lang.printer import print_program


def only_stmt(parse_ok, source):
    program = parse_ok(source)
    assert len(program.statements) == 1
    return program.statements[0]


class TestStatements:
    def test_let_with_init(self, parse_ok):
        stmt = only_stmt(parse_ok, "let a = 5;")
        assert isinstance(stmt, nodes.LetDecl)
        assert stmt.name == "a"
        assert isinstance(stmt.init, nodes.NumberLit)

    def test_let_without_init(self, parse_ok):
        stmt = only_stmt(parse_ok, "let a;")
        assert stmt.init is None

    def test_assignment_statement(self, parse_ok):
        stmt = only_stmt(parse_ok, "a = 1;")
        assert isinstance(stmt, nodes.ExprStmt)
        assert isinstance(stmt.expr, nodes.Assign)
        assert stmt.expr.op == "="

    @pytest.mark.parametrize("op", ["+=", "-=", "*=", "/=", "%="])
    def test_shorthand_assignment(self, parse_ok, op):
        stmt = only_stmt(parse_ok, f"a {op} 2;")
        assert stmt.expr.op == op

    def test_if_else_chain(self, parse_ok):
        stmt = only_stmt(
            parse_ok,
            "if (a > 1) { b = 1; } else if (a > 0) { b = 2; } else { b = 3; }",
        )
        assert isinstance(stmt, nodes.If)
        middle = stmt.else_branch
        assert isinstance(middle, nodes.If)
        assert isinstance(middle.else_branch, nodes.Block)

    def test_while(self, parse_ok):
        stmt = only_stmt(parse_ok, "while (a < 3) { a += 1; }")
        assert isinstance(stmt, nodes.While)

    def test_classic_for(self, parse_ok):
        stmt = only_stmt(parse_ok, "for (let i = 0; i < 3; i = i + 1) { a = i; }")
        assert isinstance(stmt, nodes.For)
        assert isinstance(stmt.init, nodes.LetDecl)
        assert isinstance(stmt.condition, nodes.Binary)
        assert isinstance(stmt.update, nodes.Assign)

    def test_for_with_empty_slots(self, parse_ok):
        stmt = only_stmt(parse_ok, "for (;;) { a = 1; }")
        assert stmt.init is None and stmt.condition is None and stmt.update is None

    def test_return_outside_function_rejected(self):
        assert check_syntax("return 1;")

    def test_function_and_return(self, parse_ok):
        program = parse_ok("function add(a, b) { return a + b; }\nlet r = add(1, 2);")
        func = program.statements[0]
        assert isinstance(func, nodes.FuncDecl)
        assert [p.name for p in func.params] == ["a", "b"]
        assert isinstance(func.body.statements[0], nodes.Return)

    def test_bare_return(self, parse_ok):
        program = parse_ok("function f() { return; }")
        assert program.statements[0].body.statements[0].value is None


class TestExpressions:
    def test_precedence_arithmetic(self, parse_ok):
        expr = only_stmt(parse_ok, "x = 1 + 2 * 3;").expr.value
        assert expr.op == "+"
        assert expr.right.op == "*"

    def test_precedence_comparison_over_logic(self, parse_ok):
        expr = only_stmt(parse_ok, "x = a < 1 && b > 2;").expr.value
        assert expr.op == "&&"
        assert expr.left.op == "<"

    def test_logical_or_binds_loosest(self, parse_ok):
        expr = only_stmt(parse_ok, "x = a && b || c;").expr.value
        assert expr.op == "||"

    def test_parentheses_fold_away(self, parse_ok):
        direct = only_stmt(parse_ok, "x = (1 + 2) * 3;").expr.value
        assert direct.op == "*"
        assert direct.left.op == "+"

    def test_unary_minus_and_not(self, parse_ok):
        expr = only_stmt(parse_ok, "x = -a + !b;").expr.value
        assert expr.left.op == "-"
        assert expr.right.op == "!"

    def test_loose_equality_parses(self, parse_ok):
        # == and != are grammatical; the static checker rejects them later.
        expr = only_stmt(parse_ok, "x = a == b;").expr.value
        assert expr.op == "=="

    def test_strict_equality(self, parse_ok):
        expr = only_stmt(parse_ok, "x = a === b;").expr.value
        assert expr.op == "==="

    def test_member_call_on_robot(self, parse_ok):
        expr = only_stmt(parse_ok, "robot.moveToXY(1, 2);").expr
        assert isinstance(expr, nodes.Call)
        assert isinstance(expr.callee, nodes.Member)
        assert expr.callee.namespace == "robot"
        assert expr.callee.name == "moveToXY"

    def test_call_arguments_take_full_expressions(self, parse_ok):
        expr = only_stmt(parse_ok, "console.log(a && b, 1 + 2);").expr
        assert len(expr.args) == 2
        assert expr.args[0].op == "&&"

    def test_nested_calls(self, parse_ok):
        expr = only_stmt(parse_ok, "x = f(g(1), 2);").expr.value
        assert isinstance(expr.args[0], nodes.Call)


class TestSyntaxErrors:
    def test_missing_semicolon(self):
        diagnostics = check_syntax("let a = 1")
        assert diagnostics
        assert diagnostics[0].phase.value == "syntax"

    def test_member_on_arbitrary_object_rejected(self):
        assert check_syntax("let o = 1; o.x = 2;")

    def test_member_on_console_and_robot_only(self):
        assert not check_syntax("console.log(1);")
        assert not check_syntax("robot.block();")
        assert check_syntax("window.alert(1);")

    def test_reserved_names_rejected(self):
        assert check_syntax("let robot = 1;")
        assert check_syntax("let console = 1;")
        assert check_syntax("let __rjsProbe = 1;")
        assert check_syntax("function robot() { return; }")

    def test_else_if_spelled_elseif_gets_hint(self):
        diagnostics = check_syntax("if (a) { b = 1; } elseif (c) { b = 2; }")
        assert diagnostics

    def test_recovery_reports_multiple_errors(self):
        diagnostics = check_syntax("let = 1;\nlet b = ;\n")
        assert len(diagnostics) >= 2

    def test_program_is_none_on_any_error(self):
        program, diagnostics = parse("let a = 1")
        assert program is None and diagnostics

    def test_foreign_keyword_message(self):
        diagnostics = check_syntax("var a = 1;")
        assert diagnostics
        assert "var" in diagnostics[0].message

    def test_function_redeclaration_rejected(self):
        assert check_syntax("function f() { return; } function f() { return; }")

    def test_diagnostics_sorted_by_position(self):
        diagnostics = check_syntax("let = 1;\nlet = 2;\nlet = 3;\n")
        positions = [d.span.position() for d in diagnostics]
        assert positions == sorted(positions)


class TestSpans:
    def test_statement_span_covers_whole_statement(self, parse_ok):
        stmt = only_stmt(parse_ok, "let abc = 1 + 2;")
        assert stmt.span.start_col == 1
        assert stmt.span.end_col == 16

    def test_operator_span_on_binary(self, parse_ok):
        expr = only_stmt(parse_ok, "x = 10 + 20;").expr.value
        # The binary span covers the full expression.
        assert expr.span.start_col == 5
        assert expr.span.end_col == 11

    def test_file_id_propagates(self):
        program, _ = parse("let a = 1;", "lesson.js")
        assert program.file_id == "lesson.js"
        assert program.statements[0].span.file_id == "lesson.js"


class TestPrinter:
    def test_print_parse_round_trip_fixed_point(self, parse_ok):
        source = (
            "let a = 1;\n"
            "function f(x) {\n"
            "  if (x > 1) {\n"
            "    return x * 2;\n"
            "  } else {\n"
            "    return -x;\n"
            "  }\n"
            "}\n"
            "for (let i = 0; i < 3; i = i + 1) {\n"
            "  a += f(i) % 7;\n"
            "}\n"
            'console.log("done", a, a === 4 && !(a > 9));\n'
        )
        once = print_program(parse_ok(source))
        twice = print_program(parse_ok(once))
        assert once == twice

    def test_round_trip_preserves_escapes(self, parse_ok):
        source = 'console.log("line\\nbreak \\"q\\" \\\\slash");\n'
        printed = print_program(parse_ok(source))
        reparsed = parse_ok(printed)
        arg = reparsed.statements[0].expr.args[0]
        assert arg.value == 'line\nbreak "q" \\slash'
