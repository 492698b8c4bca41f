"""Interactive evaluation sessions.

A session keeps one persistent global environment. Each submitted line is
parsed; a single expression is evaluated and its value rendered, while
declarations and other statements execute for their effect and stay
visible to later lines. Evaluation uses the checked (strict) path by
default, so a session doubles as a scratchpad for exploring what the
checks accept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..diagnostics import CheckFailure, Diagnostic, Phase
from ..lang.nodes import ExprStmt, Program
from ..lang.parser import parse
from ..span import SourceSpan
from .interpreter import Interpreter, Mode, _BudgetExhausted, _Stopped
from .ioport import IoPort, StopToken
from .values import inspect

REPL_FILE_ID = "<repl>"


@dataclass
class ReplResult:
    """Outcome of one submitted line."""

    value_text: str | None = None
    printed: list[str] = field(default_factory=list)
    diagnostic: Diagnostic | None = None
    stopped: bool = False

    @property
    def ok(self) -> bool:
        return self.diagnostic is None and not self.stopped


class ReplSession:
    def __init__(
        self,
        io: IoPort | None = None,
        mode: Mode | str = Mode.STRICT,
        *,
        budget: int = 1_000_000,
        stop: StopToken | None = None,
    ):
        empty = Program(
            statements=(),
            span=SourceSpan(REPL_FILE_ID, 1, 1, 1, 1),
            file_id=REPL_FILE_ID,
        )
        self.interp = Interpreter(
            empty, mode, io, budget=budget, stop=stop
        )
        self.budget = budget

    def eval_line(self, text: str) -> ReplResult:
        source = text.strip()
        if not source:
            return ReplResult()
        program, diagnostics = parse(source, REPL_FILE_ID)
        if program is None and not source.endswith((";", "}")):
            retry, retry_diags = parse(source + ";", REPL_FILE_ID)
            if retry is not None:
                program, diagnostics = retry, retry_diags
        if program is None:
            return ReplResult(diagnostic=diagnostics[0])
        return self._run(program)

    def _run(self, program: Program) -> ReplResult:
        interp = self.interp
        interp.steps = 0
        interp.budget = self.budget
        before = len(interp.printed)
        result = ReplResult()
        try:
            if len(program.statements) == 1 and isinstance(
                program.statements[0], ExprStmt
            ):
                value = interp.eval_expression(program.statements[0].expr)
                result.value_text = inspect(value)
            else:
                interp._exec_block_stmts(program.statements, interp.global_env)
        except CheckFailure as failure:
            result.diagnostic = failure.diagnostic()
        except _Stopped:
            result.stopped = True
        except _BudgetExhausted:
            result.diagnostic = Diagnostic(
                Phase.DYNAMIC,
                "budget",
                "Evaluation took too many steps and was stopped.",
                SourceSpan(REPL_FILE_ID, 1, 1, 1, 1),
            )
        result.printed = interp.printed[before:]
        return result
