"""The simulation server: one loop owning the world, the guard, and the wire.

Single-threaded by design: every tick it drains incoming datagrams,
admits or rejects commands through the guard, runs the adversaries, steps
physics once, and publishes a state snapshot. Commands therefore take
effect between physics steps, never mid-step, and the guard sees a
consistent world.

Reliability contract with clients: commands carry (session, req); replies
echo them. A duplicate (session, req) — a client resend that crossed with
our reply — is answered from a reply cache without re-executing, so a
command runs exactly once no matter how lossy the link is.

State streaming: any datagram arriving on the state port subscribes its
sender; subscribers silent for ten seconds are dropped. Scenario
geometry (name, obstacles, radii) goes out on subscription, on scenario
changes, and once a second as a refresher, so a viewer can join at any
time and still render walls.
"""

from __future__ import annotations

import socket
import threading
import time
from collections import OrderedDict

from ..guard.commands import Command, Kick, MoveTo, TurnTo, skill_from_message
from ..guard.config import SafetyConfig
from ..guard.guard import CommandGuard
from ..wire.envelope import Message, WireError, decode, encode
from .adversary import AdversaryDriver
from .model import Simulator
from .scenarios import Scenario, ScenarioError, get_scenario, validate_scenario
from .world import BALL_RADIUS, WorldState

DEFAULT_INGRESS_PORT = 17001
DEFAULT_STATE_PORT = 17002
SUBSCRIBER_TTL = 10.0  # s of silence before a state subscriber is dropped
SCENARIO_REFRESH = 1.0  # s between scenario-info rebroadcasts
REPLY_CACHE_SIZE = 4096


class SimServer:
    def __init__(
        self,
        scenario: Scenario | str = "empty",
        config: SafetyConfig | None = None,
        *,
        host: str = "127.0.0.1",
        ingress_port: int = DEFAULT_INGRESS_PORT,
        state_port: int = DEFAULT_STATE_PORT,
        fast: bool = False,
    ):
        self.config = config or SafetyConfig()
        self.fast = fast
        self.host = host
        self._ingress = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._ingress.bind((host, ingress_port))
        self._ingress.setblocking(False)
        self._state_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._state_sock.bind((host, state_port))
        self._state_sock.setblocking(False)
        self.ingress_address = self._ingress.getsockname()
        self.state_address = self._state_sock.getsockname()

        self.scenario: Scenario = (
            get_scenario(scenario) if isinstance(scenario, str) else scenario
        )
        self.world = WorldState()
        self.guard = CommandGuard(self.config)
        self.sim = Simulator(self.world, self.config)
        self.adversaries = AdversaryDriver(())
        self._seq = 0
        self._replies: OrderedDict[tuple[str, str], bytes] = OrderedDict()
        self._subscribers: dict[tuple[str, int], float] = {}
        self._last_scenario_broadcast = 0.0
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self.load_scenario(self.scenario)

    # ------------------------------------------------------------------
    # lifecycle

    def load_scenario(self, scenario: Scenario | str) -> None:
        if isinstance(scenario, str):
            scenario = get_scenario(scenario)
        else:
            validate_scenario(scenario, self.config)
        self.scenario = scenario
        self.world = scenario.build_world()
        self.guard = CommandGuard(self.config)
        self.sim = Simulator(self.world, self.config)
        self.adversaries = AdversaryDriver(scenario.adversaries)
        self._broadcast_scenario()

    def start(self) -> "SimServer":
        self._thread = threading.Thread(target=self.run, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None

    def close(self) -> None:
        self.stop()
        self._ingress.close()
        self._state_sock.close()

    def run(self, duration: float | None = None) -> None:
        """Run until stopped (or for `duration` simulated seconds)."""
        period = self.config.period
        end_time = self.world.time + duration if duration is not None else None
        next_tick = time.monotonic()
        while not self._stop.is_set():
            if end_time is not None and self.world.time >= end_time:
                break
            self.tick_once()
            if self.fast:
                continue
            next_tick += period
            delay = next_tick - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            elif delay < -0.25:
                next_tick = time.monotonic()  # fell far behind; resync

    # ------------------------------------------------------------------
    # one tick

    def tick_once(self) -> None:
        self._drain_ingress()
        self._drain_state_port()
        self.adversaries.tick(self.world, self.guard)
        acts = self.guard.tick(self.world)
        self.sim.step(acts)
        self._publish_state()

    def _drain_ingress(self) -> None:
        while True:
            try:
                data, addr = self._ingress.recvfrom(65536)
            except BlockingIOError:
                return
            except OSError:
                return
            try:
                message = decode(data)
            except WireError:
                continue
            reply = self._handle(message)
            if reply is not None:
                try:
                    self._ingress.sendto(reply, addr)
                except OSError:
                    pass

    def _handle(self, message: Message) -> bytes | None:
        session = message.get("session")
        req = message.get("req")
        if session is None or req is None:
            return None  # unreliable garbage; nothing to anchor a reply to
        key = (session, req)
        cached = self._replies.get(key)
        if cached is not None:
            return cached

        if message.kind == "COMMAND":
            reply = self._handle_command(message)
        elif message.kind == "SCENARIO":
            reply = self._handle_scenario(message)
        elif message.kind == "HALT":
            self.guard.halt_all(self.world)
            reply = Message("ACK").put("status", "ok")
        else:
            reply = Message("REJECT").put("reason", "unknown-kind").put(
                "detail", f"cannot handle {message.kind}."
            )
        reply.put("session", session).put("req", req)
        data = encode(reply)
        self._replies[key] = data
        while len(self._replies) > REPLY_CACHE_SIZE:
            self._replies.popitem(last=False)
        return data

    def _handle_command(self, message: Message) -> Message:
        try:
            robot_id = message.get_int("robot")
            skill = skill_from_message(message)
        except WireError as exc:
            return Message("REJECT").put("reason", "bad-command").put(
                "detail", str(exc)
            )
        accepted, rejection = self.guard.admit(Command(robot_id, skill), self.world)
        if rejection is not None:
            return (
                Message("REJECT")
                .put("robot", robot_id)
                .put("reason", rejection.reason)
                .put("detail", rejection.detail)
            )
        reply = Message("ACK").put("robot", robot_id).put("status", "ok")
        # echo the accepted command as normalized (clamping is visible)
        if isinstance(accepted, MoveTo):
            reply.put("x", accepted.x).put("y", accepted.y)
            if accepted.heading is not None:
                reply.put("heading", accepted.heading)
        elif isinstance(accepted, TurnTo):
            reply.put("heading", accepted.heading)
        elif isinstance(accepted, Kick):
            reply.put("power", accepted.power)
        return reply

    def _handle_scenario(self, message: Message) -> Message:
        name = message.get("name")
        if name is None:
            return Message("REJECT").put("reason", "bad-command").put(
                "detail", "SCENARIO needs name=."
            )
        try:
            self.load_scenario(name)
        except ScenarioError as exc:
            return Message("REJECT").put("reason", "unknown-scenario").put(
                "detail", str(exc)
            )
        return Message("ACK").put("status", "ok").put("name", name)

    # ------------------------------------------------------------------
    # state streaming

    def _drain_state_port(self) -> None:
        now = time.monotonic()
        new_subscriber = False
        while True:
            try:
                _data, addr = self._state_sock.recvfrom(65536)
            except BlockingIOError:
                break
            except OSError:
                break
            if addr not in self._subscribers:
                new_subscriber = True
            self._subscribers[addr] = now
        stale = [a for a, t in self._subscribers.items() if now - t > SUBSCRIBER_TTL]
        for addr in stale:
            del self._subscribers[addr]
        if new_subscriber:
            self._broadcast_scenario()

    def _publish_state(self) -> None:
        if not self._subscribers:
            return
        self._seq += 1
        message = Message("STATE")
        message.put("seq", self._seq).put("t", self.world.time)
        message.put("n", len(self.world.robots))
        for robot in self.world.robots:
            p = f"r{robot.robot_id}"
            slot = self.guard.slots.get(robot.robot_id)
            message.put(f"{p}.x", robot.x).put(f"{p}.y", robot.y)
            message.put(f"{p}.th", robot.theta)
            message.put(f"{p}.vx", robot.vx).put(f"{p}.vy", robot.vy)
            message.put(f"{p}.w", robot.omega)
            message.put(f"{p}.drb", robot.dribbling)
            message.put(f"{p}.halt", bool(slot.halted) if slot else True)
        ball = self.world.ball
        message.put("b.x", ball.x).put("b.y", ball.y)
        message.put("b.vx", ball.vx).put("b.vy", ball.vy)
        self._send_to_subscribers(encode(message))
        now = time.monotonic()
        if now - self._last_scenario_broadcast > SCENARIO_REFRESH:
            self._broadcast_scenario()

    def _broadcast_scenario(self) -> None:
        self._last_scenario_broadcast = time.monotonic()
        if not self._subscribers:
            return
        self._send_to_subscribers(encode(self._scenario_info()))

    def _scenario_info(self) -> Message:
        cfg = self.config
        message = Message("SCENARIO")
        message.put("name", self.scenario.name)
        message.put("fhx", cfg.field_half_x).put("fhy", cfg.field_half_y)
        message.put("rr", cfg.robot_radius).put("br", BALL_RADIUS)
        if self.scenario.obstacles:
            parts = [
                f"{x:g},{y:g},{r:g}" for x, y, r in self.scenario.obstacles
            ]
            message.put("obs", ";".join(parts))
        return message

    def _send_to_subscribers(self, data: bytes) -> None:
        for addr in list(self._subscribers):
            try:
                self._state_sock.sendto(data, addr)
            except OSError:
                pass
