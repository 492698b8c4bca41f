"""Program execution: values, runtime checks, I/O ports, interpreter, REPL."""

from .interpreter import (
    DEFAULT_STEP_BUDGET,
    ExecOutcome,
    ExecStatus,
    Interpreter,
    Mode,
    run_program,
)
from .ioport import IoPort, IoReply, IoRequest, StopToken, StubIoPort
from .repl import ReplResult, ReplSession
from .values import UNDEFINED, inspect

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "ExecOutcome",
    "ExecStatus",
    "Interpreter",
    "IoPort",
    "IoReply",
    "IoRequest",
    "Mode",
    "ReplResult",
    "ReplSession",
    "StopToken",
    "StubIoPort",
    "UNDEFINED",
    "inspect",
    "run_program",
]
