"""The robot I/O port: where interpreter calls become wire traffic.

Each `robot.*` call from a running program arrives here. Senses answer
from the most recent state frame (refusing if it is stale). Commands are
sent reliably — resent until acknowledged — and blocking motions then
hold the program until the state stream shows the robot at its target,
the sim-time deadline passes, or the program is stopped.

The port simulates blocking I/O for the interpreter: the call simply does
not return until the motion is done, so `robot.moveToXY(...);
robot.turnTo(...);` runs strictly in sequence. An event log records
send/completion times in simulated seconds for every call.
"""

from __future__ import annotations

import socket
import time
from dataclasses import dataclass, field

from ..guard.commands import MoveTo, skill_to_fields
from ..interp.ioport import IoReply, IoRequest, StopToken
from ..wire.envelope import Message, WireError, decode, encode
from ..wire.transport import new_session_id, open_udp_socket
from .session import ApiError, Completion, RobotSession, parse_state

MOTION_DEADLINE = 20.0  # simulated seconds for one blocking motion
RESEND_INTERVAL = 0.1
COMMAND_TIMEOUT = 2.0
SENSE_WAIT = 1.0  # s to wait for a first state frame before giving up

_SENSES = frozenset(
    (
        "getPosX",
        "getPosY",
        "getAngle",
        "getBallPosX",
        "getBallPosY",
        "getBallVelX",
        "getBallVelY",
    )
)


@dataclass
class ApiEvent:
    api: str
    args: tuple
    sent_sim_time: float | None
    done_sim_time: float | None
    status: str  # "ok", "rejected", "timeout", "stopped", "error"
    detail: str = ""


@dataclass
class RobotIoPort:
    """IoPort implementation speaking the datagram protocol."""

    server: tuple[str, int]
    state_server: tuple[str, int]
    session: RobotSession = field(default_factory=RobotSession)
    events: list[ApiEvent] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.session_id = new_session_id()
        self._req = 0
        self._cmd_sock = open_udp_socket()
        self._state_sock = open_udp_socket()
        self._state_sock.setblocking(False)
        self._last_hello = 0.0
        self._hello()

    def close(self) -> None:
        self._cmd_sock.close()
        self._state_sock.close()

    # ------------------------------------------------------------------
    # IoPort interface

    def call(self, request: IoRequest, stop: StopToken) -> IoReply | None:
        name = request.api_name.split(".", 1)[-1]
        try:
            return self._dispatch(name, request, stop)
        except ApiError as exc:
            self.events.append(
                ApiEvent(
                    request.api_name,
                    request.args,
                    self._sim_time(),
                    self._sim_time(),
                    "error",
                    str(exc),
                )
            )
            return IoReply(request.request_id, error=str(exc), error_category=exc.category)

    def _dispatch(
        self, name: str, request: IoRequest, stop: StopToken
    ) -> IoReply | None:
        self._pump_state()
        if name in _SENSES or name == "setRobotId":
            if self.session.snapshot is None:
                self._wait_for_state(stop, SENSE_WAIT)
                if stop.stopped():
                    return None
        if name in _SENSES:
            value = self.session.sense(name, time.monotonic())
            self.events.append(
                ApiEvent(
                    request.api_name, request.args, self._sim_time(),
                    self._sim_time(), "ok",
                )
            )
            return IoReply(request.request_id, value=value)
        if name == "setRobotId":
            self.session.set_robot_id(
                request.args[0] if request.args else None, time.monotonic()
            )
            self.events.append(
                ApiEvent(
                    request.api_name, request.args, self._sim_time(),
                    self._sim_time(), "ok",
                )
            )
            return IoReply(request.request_id)

        translated = self.session.translate(name, request.args, time.monotonic())
        sent_at = self._sim_time()
        ack = self._send_reliable(translated.skill, stop)
        if ack is None:
            return None  # stopped while sending
        if ack.kind == "REJECT":
            reason = ack.get("reason", "rejected")
            detail = ack.get("detail", "")
            self.events.append(
                ApiEvent(
                    request.api_name, request.args, sent_at, self._sim_time(),
                    "rejected", f"{reason}: {detail}",
                )
            )
            raise ApiError(f"{detail}" if detail else f"command rejected ({reason}).")

        completion = translated.completion
        if completion is not None and isinstance(translated.skill, MoveTo):
            # the guard may have clamped the target; finish at the real one
            try:
                completion.x = ack.get_float("x")
                completion.y = ack.get_float("y")
            except WireError:
                pass
        if completion is not None:
            outcome = self._await_completion(completion, stop)
            if outcome is None:
                return None
            if not outcome:
                self.events.append(
                    ApiEvent(
                        request.api_name, request.args, sent_at,
                        self._sim_time(), "timeout",
                    )
                )
                raise ApiError(
                    f"did not finish within {MOTION_DEADLINE:.0f} simulated seconds."
                )
        self.events.append(
            ApiEvent(
                request.api_name, request.args, sent_at, self._sim_time(), "ok",
            )
        )
        return IoReply(request.request_id)

    # ------------------------------------------------------------------
    # wire plumbing

    def _sim_time(self) -> float | None:
        snap = self.session.snapshot
        return snap.time if snap is not None else None

    def _hello(self) -> None:
        try:
            self._state_sock.sendto(b"SUB", self.state_server)
            self._last_hello = time.monotonic()
        except OSError:
            pass

    def _pump_state(self) -> None:
        now = time.monotonic()
        if now - self._last_hello > 2.0:
            self._hello()
        while True:
            try:
                data, _addr = self._state_sock.recvfrom(65536)
            except BlockingIOError:
                break
            except OSError:
                break
            try:
                message = decode(data)
            except WireError:
                continue
            if message.kind == "STATE":
                self.session.update(parse_state(message), time.monotonic())

    def _wait_for_state(self, stop: StopToken, timeout: float) -> None:
        deadline = time.monotonic() + timeout
        while self.session.snapshot is None and time.monotonic() < deadline:
            if stop.stopped():
                return
            time.sleep(0.02)
            self._pump_state()

    def _send_reliable(self, skill, stop: StopToken) -> Message | None:
        """reliable_command with stop-awareness; None means stopped."""
        self._req += 1
        req = str(self._req)
        message = Message("COMMAND")
        message.put("session", self.session_id).put("req", req)
        message.put("robot", self.session.robot_id)
        skill_to_fields(skill, message)
        payload = encode(message)
        deadline = time.monotonic() + COMMAND_TIMEOUT
        while True:
            if stop.stopped():
                return None
            now = time.monotonic()
            if now >= deadline:
                raise ApiError(
                    "no reply from the robot server "
                    f"within {COMMAND_TIMEOUT:.1f} s; is it running?"
                )
            try:
                self._cmd_sock.sendto(payload, self.server)
            except OSError as exc:
                raise ApiError(f"cannot send command: {exc}") from exc
            resend_at = min(now + RESEND_INTERVAL, deadline)
            while True:
                remaining = resend_at - time.monotonic()
                if remaining <= 0:
                    break
                self._cmd_sock.settimeout(min(remaining, 0.05))
                try:
                    data, _addr = self._cmd_sock.recvfrom(65536)
                except socket.timeout:
                    if stop.stopped():
                        return None
                    continue
                except OSError:
                    break
                try:
                    reply = decode(data)
                except WireError:
                    continue
                if (
                    reply.kind in ("ACK", "REJECT")
                    and reply.get("session") == self.session_id
                    and reply.get("req") == req
                ):
                    self._cmd_sock.settimeout(None)
                    return reply

    def _await_completion(
        self, completion: Completion, stop: StopToken
    ) -> bool | None:
        """True done, False deadline passed, None stopped."""
        start = self._sim_time()
        wall_guard = time.monotonic() + MOTION_DEADLINE * 40  # paced-run safety net
        while True:
            if stop.stopped():
                return None
            self._pump_state()
            snap = self.session.snapshot
            if snap is not None and self.session.robot_id is not None:
                robot = snap.robots.get(self.session.robot_id)
                if robot is not None and completion.satisfied(robot):
                    return True
                if start is None:
                    start = snap.time
                elif snap.time - start > MOTION_DEADLINE:
                    return False
            if time.monotonic() > wall_guard:
                return False
            time.sleep(0.002)

    # ------------------------------------------------------------------

    def send_halt(self) -> None:
        """Best-effort halt (used when a run is stopped mid-motion)."""
        self._req += 1
        message = Message("HALT")
        message.put("session", self.session_id).put("req", str(self._req))
        try:
            self._cmd_sock.sendto(encode(message), self.server)
        except OSError:
            pass
