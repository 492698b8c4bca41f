"""WebSocket bridge between browser IDE clients and the simulator.

The bridge is the single endpoint a browser talks to.  It serves the static
IDE assets over plain HTTP, upgrades ``/ws`` to a WebSocket, and speaks the
same one-line ``KIND key=value`` format used on the datagram wire (text
frames, so there is no size cap and unicode is allowed).

Per client connection the bridge owns:

* a :class:`~robojs.api.dispatcher.RobotIoPort` bound to the simulator, so
  programs and REPL lines share one robot session (``setRobotId`` persists),
* a strict-mode REPL session,
* a state-forwarding thread that subscribes to the simulator's state feed
  and relays STATE/SCENARIO lines to the browser.  The relay queue holds at
  most :data:`STATE_QUEUE_LIMIT` frames; when the browser cannot keep up the
  oldest frames are dropped and a running ``dropped`` counter is attached to
  forwarded frames.

Programs started from the IDE run the rewritten-source path: the program is
statically checked, rewritten to route reads/operators through the runtime
check helpers, and executed by the permissive interpreter.  A statically
clean program therefore behaves exactly as it would under the strict
interpreter, while the executing engine never needs a trusting mode switch.

Client -> bridge kinds:

``RUN file= source=``        parse/check/rewrite/execute, streaming output
``STOP``                     cancel the active run and halt the robot
``REPL line=``               evaluate one line in the persistent session
``SCENARIO name=``           ask the simulator to load a scenario preset
``SCENARIOS``                list the scenario presets the simulator offers
``FILES``                    list stored files for this workspace account
``LOAD file= [revision=]``   fetch a stored revision (default: latest)
``SAVE file= source=``       store a revision if the source changed
``MANIFEST``                 the robot/console API catalog as JSON

Bridge -> client kinds:

``STATUS state= [detail=] [steps=]``
``PRINT line=``
``DIAG file= line= col= endline= endcol= phase= category= message=``
``REPL [value=] ok=``
``SCENARIOS names=``
``FILES names= revisions=``
``FILE file= revision= source=``
``SAVED file= revision= created=``
``MANIFEST apis=``
``STATE ...`` / ``SCENARIO ...``  (forwarded simulator frames)
"""

from __future__ import annotations

import mimetypes
import re
import socket
import threading
import time
from collections import deque
from pathlib import Path

from websockets.http11 import Response
from websockets.datastructures import Headers
from websockets.sync.server import Server, ServerConnection, serve

from ..api.dispatcher import RobotIoPort
from ..api.manifest import manifest_json
from ..check.instrument import NotStaticallyClean, instrument
from ..diagnostics import Diagnostic
from ..interp import Mode, ReplSession, StopToken, run_program
from ..lang.parser import parse
from .envelope import Message, WireError, decode, decode_text, encode_text
from .transport import TransportTimeout, new_session_id, open_udp_socket, reliable_command

DEFAULT_BRIDGE_PORT = 17080
STATE_QUEUE_LIMIT = 10
_SUBSCRIBE_INTERVAL = 2.0
_FILE_NAME = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]{0,63}\.js$")

_TEXT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".map": "application/json; charset=utf-8",
}


class FileStore:
    """Revision-per-run program storage.

    Layout: ``<root>/<account>/<file-stem>/<NNN>.js`` with ``NNN`` counting
    up from 001.  A new revision is written only when the saved source
    differs from the latest stored revision, so repeated runs of the same
    text do not multiply files.  The layout doubles as the on-disk corpus
    format the analyzer consumes.
    """

    def __init__(self, root: str | Path, account: str = "student") -> None:
        if not re.fullmatch(r"[A-Za-z0-9_-]{1,64}", account):
            raise ValueError(f"invalid account name: {account!r}")
        self.root = Path(root)
        self.account = account
        self._lock = threading.Lock()

    def _file_dir(self, file: str) -> Path:
        if not _FILE_NAME.fullmatch(file):
            raise ValueError(f"invalid file name: {file!r}")
        return self.root / self.account / file[: -len(".js")]

    def list_files(self) -> list[tuple[str, int]]:
        base = self.root / self.account
        if not base.is_dir():
            return []
        out = []
        for child in sorted(base.iterdir()):
            if child.is_dir():
                revisions = len(list(child.glob("[0-9][0-9][0-9].js")))
                if revisions:
                    out.append((child.name + ".js", revisions))
        return out

    def _revisions(self, file: str) -> list[Path]:
        directory = self._file_dir(file)
        if not directory.is_dir():
            return []
        return sorted(directory.glob("[0-9][0-9][0-9].js"))

    def latest(self, file: str) -> tuple[int, str] | None:
        revisions = self._revisions(file)
        if not revisions:
            return None
        path = revisions[-1]
        return int(path.stem), path.read_text(encoding="utf-8")

    def revision(self, file: str, number: int) -> str | None:
        path = self._file_dir(file) / f"{number:03d}.js"
        if not path.is_file():
            return None
        return path.read_text(encoding="utf-8")

    def save_if_changed(self, file: str, source: str) -> tuple[int, bool]:
        """Store ``source`` as a new revision unless it matches the latest.

        Returns ``(revision_number, created)``.
        """
        with self._lock:
            current = self.latest(file)
            if current is not None and current[1] == source:
                return current[0], False
            number = 1 if current is None else current[0] + 1
            directory = self._file_dir(file)
            directory.mkdir(parents=True, exist_ok=True)
            (directory / f"{number:03d}.js").write_text(source, encoding="utf-8")
            return number, True


def _not_found() -> Response:
    body = b"not found\n"
    return Response(404, "Not Found", Headers([
        ("Content-Type", "text/plain; charset=utf-8"),
        ("Content-Length", str(len(body))),
    ]), body)


def _serve_static(web_root: Path | None, path: str) -> Response:
    if path in ("/healthz", "/health"):
        body = b"ok\n"
        return Response(200, "OK", Headers([
            ("Content-Type", "text/plain; charset=utf-8"),
            ("Content-Length", str(len(body))),
        ]), body)
    if web_root is None:
        body = (
            b"robojs bridge is running.\n"
            b"Connect a WebSocket client to /ws, or restart with a web root"
            b" to serve the IDE.\n"
        )
        return Response(200, "OK", Headers([
            ("Content-Type", "text/plain; charset=utf-8"),
            ("Content-Length", str(len(body))),
        ]), body)
    rel = path.split("?", 1)[0].lstrip("/") or "index.html"
    target = (web_root / rel).resolve()
    try:
        target.relative_to(web_root.resolve())
    except ValueError:
        return _not_found()
    if target.is_dir():
        target = target / "index.html"
    if not target.is_file():
        return _not_found()
    body = target.read_bytes()
    content_type = _TEXT_TYPES.get(target.suffix.lower())
    if content_type is None:
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
    return Response(200, "OK", Headers([
        ("Content-Type", content_type),
        ("Content-Length", str(len(body))),
        ("Cache-Control", "no-cache"),
    ]), body)


class _StateRelay:
    """Subscribes to the simulator state feed and forwards frames.

    A reader thread keeps at most :data:`STATE_QUEUE_LIMIT` frames queued;
    when the queue is full the oldest frame is discarded and counted.  A
    sender thread drains the queue into the WebSocket so a slow browser
    only ever sees fresh frames.
    """

    def __init__(self, client: "_ClientSession", state_server: tuple[str, int]) -> None:
        self.client = client
        self.state_server = state_server
        self.sock = open_udp_socket()
        self.sock.settimeout(0.2)
        self.queue: deque[bytes] = deque()
        self.dropped = 0
        self._cond = threading.Condition()
        self._closed = False
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._sender = threading.Thread(target=self._send_loop, daemon=True)

    def start(self) -> None:
        self._reader.start()
        self._sender.start()

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()
        self.sock.close()

    def _read_loop(self) -> None:
        last_hello = 0.0
        while not self._closed:
            now = time.monotonic()
            if now - last_hello >= _SUBSCRIBE_INTERVAL:
                try:
                    self.sock.sendto(b"SUB", self.state_server)
                except OSError:
                    pass
                last_hello = now
            try:
                data, _ = self.sock.recvfrom(4096)
            except socket.timeout:
                continue
            except OSError:
                return
            with self._cond:
                if len(self.queue) >= STATE_QUEUE_LIMIT:
                    self.queue.popleft()
                    self.dropped += 1
                self.queue.append(data)
                self._cond.notify()

    def _send_loop(self) -> None:
        while True:
            with self._cond:
                while not self.queue and not self._closed:
                    self._cond.wait(0.5)
                if self._closed and not self.queue:
                    return
                data = self.queue.popleft()
                dropped = self.dropped
            try:
                message = decode(data)
            except WireError:
                continue
            if dropped:
                message.put("dropped", str(dropped))
            self.client.send_message(message)


class _ClientSession:
    """State owned by one connected IDE client."""

    def __init__(self, bridge: "BridgeServer", ws: ServerConnection) -> None:
        self.bridge = bridge
        self.ws = ws
        self._send_lock = threading.Lock()
        self.port = RobotIoPort(bridge.sim_ingress, bridge.sim_state)
        self.repl: ReplSession | None = None
        self.relay = _StateRelay(self, bridge.sim_state)
        self.run_thread: threading.Thread | None = None
        self.stop_token = StopToken()
        self.closed = False

    # -- outgoing ------------------------------------------------------

    def send_message(self, message: Message) -> None:
        if self.closed:
            return
        try:
            with self._send_lock:
                self.ws.send(encode_text(message))
        except Exception:
            self.closed = True

    def send(self, kind: str, **fields: object) -> None:
        message = Message(kind)
        for key, value in fields.items():
            message.put(key, value)
        self.send_message(message)

    def send_status(self, state: str, detail: str = "", **extra: object) -> None:
        fields: dict[str, object] = {"state": state}
        if detail:
            fields["detail"] = detail
        fields.update(extra)
        self.send("STATUS", **fields)

    def send_diagnostic(self, diagnostic: Diagnostic) -> None:
        span = diagnostic.span
        self.send(
            "DIAG",
            file=span.file_id,
            line=span.start_line,
            col=span.start_col,
            endline=span.end_line,
            endcol=span.end_col,
            phase=diagnostic.phase.value,
            category=diagnostic.category,
            message=diagnostic.message,
        )

    # -- lifecycle -----------------------------------------------------

    def serve(self) -> None:
        self.relay.start()
        self.send_status("idle", version="1")
        for raw in self.ws:
            if isinstance(raw, bytes):
                try:
                    raw = raw.decode("utf-8")
                except UnicodeDecodeError:
                    self.send_status("error", "bad-message")
                    continue
            try:
                message = decode_text(raw)
            except WireError as exc:
                self.send_status("error", f"bad-message: {exc}")
                continue
            try:
                self._dispatch(message)
            except Exception as exc:  # keep the connection alive
                self.send_status("error", f"internal: {exc}")

    def close(self) -> None:
        self.closed = True
        self.stop_token.stop()
        self.relay.close()
        if self.run_thread is not None and self.run_thread.is_alive():
            self.run_thread.join(timeout=2.0)
        self.port.send_halt()
        self.port.close()

    # -- dispatch ------------------------------------------------------

    def _dispatch(self, message: Message) -> None:
        kind = message.kind
        if kind == "RUN":
            self._handle_run(message)
        elif kind == "STOP":
            self._handle_stop()
        elif kind == "REPL":
            self._handle_repl(message)
        elif kind == "SCENARIO":
            self._handle_scenario(message)
        elif kind == "SCENARIOS":
            self._handle_scenarios()
        elif kind == "FILES":
            self._handle_files()
        elif kind == "LOAD":
            self._handle_load(message)
        elif kind == "SAVE":
            self._handle_save(message)
        elif kind == "MANIFEST":
            self.send("MANIFEST", apis=manifest_json())
        else:
            self.send_status("error", f"unknown-kind: {kind}")

    def _running(self) -> bool:
        return self.run_thread is not None and self.run_thread.is_alive()

    def _handle_run(self, message: Message) -> None:
        if self._running():
            self.send_status("error", "run-in-progress")
            return
        file = message.get("file", "main.js")
        source = message.get("source")
        if source is None:
            self.send_status("error", "missing-source")
            return
        if not _FILE_NAME.fullmatch(file):
            self.send_status("error", "bad-file-name")
            return
        try:
            revision, created = self.bridge.store.save_if_changed(file, source)
        except OSError as exc:
            self.send_status("error", f"store-failed: {exc}")
            return
        if created:
            self.send("SAVED", file=file, revision=revision, created=True)
        self.stop_token = StopToken()
        self.run_thread = threading.Thread(
            target=self._run_program, args=(file, source, self.stop_token), daemon=True
        )
        self.run_thread.start()

    def _run_program(self, file: str, source: str, stop: StopToken) -> None:
        self.send_status("running", file=file)
        try:
            program, diagnostics = parse(source, file_id=file)
            if diagnostics or program is None:
                for diagnostic in diagnostics:
                    self.send_diagnostic(diagnostic)
                self.send_status("aborted", "syntax", steps=0)
                return
            try:
                rewritten = instrument(program)
            except NotStaticallyClean as exc:
                for diagnostic in exc.diagnostics:
                    self.send_diagnostic(diagnostic)
                self.send_status("aborted", "static", steps=0)
                return
            rewritten_program, rewrite_diags = parse(rewritten, file_id=file)
            if rewritten_program is None:
                raise RuntimeError(f"rewritten program failed to parse: {rewrite_diags}")
            outcome = run_program(
                rewritten_program,
                Mode.PERMISSIVE,
                io=self.port,
                stop=stop,
                on_print=lambda line: self.send("PRINT", line=line),
                diagnostic_file_id=file,
            )
        except Exception as exc:
            self.send_status("error", f"internal: {exc}")
            return
        if outcome.status.value == "aborted" and outcome.diagnostic is not None:
            self.send_diagnostic(outcome.diagnostic)
        self.send_status(outcome.status.value, steps=outcome.steps)

    def _handle_stop(self) -> None:
        self.stop_token.stop()
        self.port.send_halt()
        if not self._running():
            self.send_status("idle")

    def _handle_repl(self, message: Message) -> None:
        if self._running():
            self.send_status("error", "run-in-progress")
            return
        line = message.get("line", "")
        if self.repl is None:
            self.repl = ReplSession(io=self.port, mode=Mode.STRICT)
        result = self.repl.eval_line(line)
        for printed in result.printed:
            self.send("PRINT", line=printed)
        if result.diagnostic is not None:
            self.send_diagnostic(result.diagnostic)
        fields: dict[str, object] = {"ok": result.ok}
        if result.value_text is not None:
            fields["value"] = result.value_text
        self.send("REPL", **fields)

    def _handle_scenario(self, message: Message) -> None:
        name = message.get("name")
        if not name:
            self.send_status("error", "missing-scenario-name")
            return
        if self._running():
            self.send_status("error", "run-in-progress")
            return
        request = Message("SCENARIO")
        request.put("session", new_session_id()).put("req", "1").put("name", name)
        sock = open_udp_socket()
        try:
            reply = reliable_command(sock, self.bridge.sim_ingress, request, timeout=2.0)
        except TransportTimeout:
            self.send_status("error", "scenario-timeout")
            return
        finally:
            sock.close()
        if reply.kind == "REJECT":
            self.send_status("error", f"scenario: {reply.get('detail', reply.get('reason', ''))}")
        else:
            self.send_status("idle", scenario=name)

    def _handle_scenarios(self) -> None:
        # resolved here, not at import time: sim pulls in this package's
        # codec, so a top-level import would close an import cycle
        from ..sim.scenarios import PRESETS

        self.send("SCENARIOS", names=",".join(PRESETS))

    def _handle_files(self) -> None:
        entries = self.bridge.store.list_files()
        self.send(
            "FILES",
            names=",".join(name for name, _ in entries),
            revisions=",".join(str(count) for _, count in entries),
        )

    def _handle_load(self, message: Message) -> None:
        file = message.get("file", "")
        try:
            if message.get("revision"):
                number = message.get_int("revision")
                source = self.bridge.store.revision(file, number)
                if source is None:
                    self.send_status("error", "no-such-revision")
                    return
                self.send("FILE", file=file, revision=number, source=source)
                return
            latest = self.bridge.store.latest(file)
        except (ValueError, WireError):
            self.send_status("error", "bad-file-name")
            return
        if latest is None:
            self.send_status("error", "no-such-file")
            return
        number, source = latest
        self.send("FILE", file=file, revision=number, source=source)

    def _handle_save(self, message: Message) -> None:
        file = message.get("file", "")
        source = message.get("source")
        if source is None:
            self.send_status("error", "missing-source")
            return
        try:
            revision, created = self.bridge.store.save_if_changed(file, source)
        except (ValueError, OSError) as exc:
            self.send_status("error", f"store-failed: {exc}")
            return
        self.send("SAVED", file=file, revision=revision, created=created)


class BridgeServer:
    """Serves the IDE assets and relays IDE traffic to the simulator."""

    def __init__(
        self,
        sim_ingress: tuple[str, int],
        sim_state: tuple[str, int],
        *,
        host: str = "127.0.0.1",
        port: int = DEFAULT_BRIDGE_PORT,
        web_root: str | Path | None = None,
        files_root: str | Path = "robojs-workspace",
        account: str = "student",
    ) -> None:
        self.sim_ingress = sim_ingress
        self.sim_state = sim_state
        self.host = host
        self.web_root = Path(web_root) if web_root is not None else None
        self.store = FileStore(files_root, account)
        self._server: Server = serve(
            self._handler,
            host,
            port,
            process_request=self._process_request,
        )
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        sock = self._server.socket
        addr = sock.getsockname()
        return addr[0], addr[1]

    def _process_request(self, connection: ServerConnection, request) -> Response | None:
        path = request.path.split("?", 1)[0]
        if path == "/ws":
            return None
        return _serve_static(self.web_root, request.path)

    def _handler(self, ws: ServerConnection) -> None:
        client = _ClientSession(self, ws)
        try:
            client.serve()
        except Exception:
            pass
        finally:
            client.close()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    close = stop
