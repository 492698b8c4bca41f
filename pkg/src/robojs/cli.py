"""Command-line front end: check, compile, run, repl, manifest.

``robojs run`` executes with the strict interpreter by default, aborting on
the first check failure exactly as the live environment would.  With
``--permissive`` the program runs under plain JavaScript semantics, and with
``--rewritten`` it runs the production path: static checks, source rewrite,
then the permissive engine (observably identical to strict for clean
programs).

Robot calls go to a simulator when ``--server`` is given; otherwise they are
answered by an instant stub so robot-free programs and quick experiments
work offline.
"""

from __future__ import annotations

import argparse
import sys

from .api.manifest import manifest_json
from .check.instrument import AlreadyInstrumented, NotStaticallyClean, instrument
from .check.statics import static_check
from .interp import (
    ExecStatus,
    Mode,
    ReplSession,
    StubIoPort,
    run_program,
)
from .lang.parser import parse


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_host_port(text: str, default_port: int) -> tuple[str, int]:
    if ":" in text:
        host, _, port = text.rpartition(":")
        return host or "127.0.0.1", int(port)
    return text, default_port


def _make_io(args: argparse.Namespace):
    if getattr(args, "server", None):
        from .api.dispatcher import RobotIoPort

        ingress = _parse_host_port(args.server, 17001)
        if args.state:
            state = _parse_host_port(args.state, 17002)
        else:
            state = (ingress[0], ingress[1] + 1)
        return RobotIoPort(ingress, state)
    return StubIoPort()


def cmd_check(args: argparse.Namespace) -> int:
    worst = 0
    for path in args.files:
        source = _read_source(path)
        file_id = "<stdin>" if path == "-" else path
        program, diagnostics = parse(source, file_id=file_id)
        if program is not None:
            diagnostics = diagnostics + static_check(program)
        for diagnostic in diagnostics:
            print(diagnostic.render())
        if diagnostics:
            worst = 1
    return worst


def cmd_compile(args: argparse.Namespace) -> int:
    source = _read_source(args.file)
    file_id = "<stdin>" if args.file == "-" else args.file
    program, diagnostics = parse(source, file_id=file_id)
    if program is None:
        for diagnostic in diagnostics:
            print(diagnostic.render(), file=sys.stderr)
        return 1
    try:
        rewritten = instrument(program)
    except NotStaticallyClean as exc:
        for diagnostic in exc.diagnostics:
            print(diagnostic.render(), file=sys.stderr)
        return 1
    except AlreadyInstrumented:
        print(f"{file_id}: already rewritten", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(rewritten)
    else:
        sys.stdout.write(rewritten)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    source = _read_source(args.file)
    file_id = "<stdin>" if args.file == "-" else args.file
    program, diagnostics = parse(source, file_id=file_id)
    if program is None:
        for diagnostic in diagnostics:
            print(diagnostic.render(), file=sys.stderr)
        return 1
    io = _make_io(args)
    try:
        if args.rewritten:
            try:
                rewritten = instrument(program)
            except NotStaticallyClean as exc:
                for diagnostic in exc.diagnostics:
                    print(diagnostic.render(), file=sys.stderr)
                return 1
            program, rewrite_diags = parse(rewritten, file_id=file_id)
            if program is None:
                raise RuntimeError(f"rewritten program failed to parse: {rewrite_diags}")
            mode = Mode.PERMISSIVE
        else:
            mode = Mode.PERMISSIVE if args.permissive else Mode.STRICT
        outcome = run_program(
            program,
            mode,
            io=io,
            budget=args.budget,
            on_print=print,
            diagnostic_file_id=file_id,
        )
    finally:
        close = getattr(io, "close", None)
        if close is not None:
            close()
    if outcome.diagnostic is not None:
        print(outcome.diagnostic.render(), file=sys.stderr)
    if outcome.status is ExecStatus.COMPLETED:
        return 0
    if outcome.diagnostic is None:
        # stopped or budget-exhausted: still say why the exit is nonzero
        print(f"{file_id}: {outcome.status.value}", file=sys.stderr)
    return 1


def cmd_repl(args: argparse.Namespace) -> int:
    io = _make_io(args)
    mode = Mode.PERMISSIVE if args.permissive else Mode.STRICT
    session = ReplSession(io=io, mode=mode)
    print(f"robojs repl ({mode.value} checks); Ctrl-D to exit")
    try:
        while True:
            try:
                line = input("> ")
            except EOFError:
                print()
                return 0
            except KeyboardInterrupt:
                print()
                continue
            result = session.eval_line(line)
            for printed in result.printed:
                print(printed)
            if result.diagnostic is not None:
                print(result.diagnostic.render(), file=sys.stderr)
            elif result.value_text is not None:
                print(result.value_text)
    finally:
        close = getattr(io, "close", None)
        if close is not None:
            close()


def cmd_manifest(args: argparse.Namespace) -> int:
    print(manifest_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robojs",
        description="Checked-JavaScript robot programming tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="report syntax and static-check findings")
    p_check.add_argument("files", nargs="+", help="source files ('-' for stdin)")
    p_check.set_defaults(func=cmd_check)

    p_compile = sub.add_parser(
        "compile", help="rewrite a clean program to its self-checking form"
    )
    p_compile.add_argument("file", help="source file ('-' for stdin)")
    p_compile.add_argument("-o", "--output", help="write to a file instead of stdout")
    p_compile.set_defaults(func=cmd_compile)

    p_run = sub.add_parser("run", help="execute a program")
    p_run.add_argument("file", help="source file ('-' for stdin)")
    p_run.add_argument(
        "--permissive",
        action="store_true",
        help="run with plain JavaScript semantics instead of strict checks",
    )
    p_run.add_argument(
        "--rewritten",
        action="store_true",
        help="run the production path: rewrite, then execute permissively",
    )
    p_run.add_argument(
        "--budget", type=int, default=10_000_000, help="step budget (default 10M)"
    )
    p_run.add_argument(
        "--server",
        help="simulator command address HOST:PORT (default: offline stub)",
    )
    p_run.add_argument(
        "--state",
        help="simulator state address HOST:PORT (default: command port + 1)",
    )
    p_run.set_defaults(func=cmd_run)

    p_repl = sub.add_parser("repl", help="interactive session")
    p_repl.add_argument("--permissive", action="store_true")
    p_repl.add_argument("--server", help="simulator command address HOST:PORT")
    p_repl.add_argument("--state", help="simulator state address HOST:PORT")
    p_repl.set_defaults(func=cmd_repl)

    p_manifest = sub.add_parser("manifest", help="print the robot/console API catalog")
    p_manifest.set_defaults(func=cmd_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
