"""The UDP simulation server: dedup, rejection, state stream, scenarios."""

import socket
import time

import pytest

from robojs.sim import REPLY_CACHE_SIZE, SUBSCRIBER_TTL, SimServer
from robojs.wire import Message, decode, encode, open_udp_socket


@pytest.fixture()
def server():
    server = SimServer("empty", ingress_port=0, state_port=0)
    yield server
    server.close()


@pytest.fixture()
def client():
    sock = open_udp_socket()
    sock.settimeout(1.0)
    yield sock
    sock.close()


def command(session, req, robot=0, **fields):
    msg = Message("COMMAND")
    msg.put("session", session).put("req", req).put("robot", robot)
    for key, value in fields.items():
        msg.put(key, value)
    return msg


def exchange(server, client, message) -> Message:
    client.sendto(encode(message), server.ingress_address)
    server.tick_once()
    data, _ = client.recvfrom(65536)
    return decode(data)


class TestCommands:
    def test_move_command_acked_with_normalized_target(self, server, client):
        reply = exchange(
            server, client, command("s1", "1", skill="MOVE_TO", x=0.5, y=0.25)
        )
        assert reply.kind == "ACK"
        assert (reply.get("session"), reply.get("req")) == ("s1", "1")
        assert reply.get_float("x") == 0.5
        assert reply.get_float("y") == 0.25

    def test_clamped_target_echoed(self, server, client):
        reply = exchange(
            server, client, command("s1", "1", skill="MOVE_TO", x=9.0, y=9.0)
        )
        assert reply.kind == "ACK"
        assert reply.get_float("x") == server.config.inset_x
        assert reply.get_float("y") == server.config.inset_y

    def test_duplicate_request_not_reexecuted(self, server, client):
        msg = command("s1", "7", skill="MOVE_TO", x=0.5, y=0.0)
        first = exchange(server, client, msg)
        slot = server.guard.slots[0]
        admitted_at = slot.last_command_time

        for _ in range(30):  # half a simulated second passes
            server.tick_once()

        second = exchange(server, client, msg)
        assert second.fields == first.fields
        # The slot was not touched again: the cached reply was replayed.
        assert server.guard.slots[0].last_command_time == admitted_at

    def test_kick_rejected_when_ball_is_far(self, server, client):
        reply = exchange(server, client, command("s1", "1", skill="KICK", power=1.0))
        assert reply.kind == "REJECT"
        assert reply.get("reason") == "kick-out-of-range"
        assert "m away" in reply.get("detail")

    def test_malformed_command_rejected(self, server, client):
        reply = exchange(server, client, command("s1", "1", skill="WARP", x=1.0))
        assert reply.kind == "REJECT"
        assert reply.get("reason") == "bad-command"

    def test_unknown_robot_rejected(self, server, client):
        reply = exchange(
            server, client, command("s1", "1", robot=5, skill="MOVE_TO", x=0.0, y=0.0)
        )
        assert reply.kind == "REJECT"
        assert reply.get("reason") == "unknown-robot"

    def test_unanchored_message_gets_no_reply(self, server, client):
        msg = Message("COMMAND", {"skill": "MOVE_TO", "x": "0.0", "y": "0.0"})
        client.sendto(encode(msg), server.ingress_address)
        server.tick_once()
        client.settimeout(0.1)
        with pytest.raises(socket.timeout):
            client.recvfrom(65536)

    def test_unknown_kind_rejected(self, server, client):
        msg = Message("SCENARIO", {"session": "s1", "req": "1"})  # missing name
        reply = exchange(server, client, msg)
        assert reply.kind == "REJECT"

    def test_halt_message_halts_everyone(self, server, client):
        exchange(server, client, command("s1", "1", skill="MOVE_TO", x=0.5, y=0.0))
        msg = Message("HALT", {"session": "s1", "req": "2"})
        reply = exchange(server, client, msg)
        assert reply.kind == "ACK"
        assert all(slot.halted for slot in server.guard.slots.values())

    def test_reply_cache_is_bounded(self, server):
        for i in range(REPLY_CACHE_SIZE + 64):
            server._handle(command("s1", str(i), skill="HALT"))
        assert len(server._replies) == REPLY_CACHE_SIZE


class TestStateStream:
    def test_subscriber_receives_scenario_then_states(self, server, client):
        client.sendto(b"SUB", server.state_address)
        server.tick_once()
        kinds = []
        client.settimeout(1.0)
        for _ in range(2):
            data, _ = client.recvfrom(65536)
            kinds.append(decode(data).kind)
        assert kinds[0] == "SCENARIO"
        assert kinds[1] == "STATE"

    def test_state_fields(self, server, client):
        client.sendto(b"SUB", server.state_address)
        server.tick_once()
        message = None
        for _ in range(3):
            data, _ = client.recvfrom(65536)
            message = decode(data)
            if message.kind == "STATE":
                break
        assert message.kind == "STATE"
        assert message.get_int("seq") >= 1
        assert message.get_float("t") > 0.0
        assert message.get_int("n") == 1
        # "empty" scenario: robot 0 at (-1.5, -0.9), ball at the center.
        assert message.get_float("r0.x") == pytest.approx(-1.5, abs=0.01)
        assert message.get_float("r0.y") == pytest.approx(-0.9, abs=0.01)
        assert message.get("r0.halt") == "true"  # no command yet
        assert message.get_float("b.x") == pytest.approx(0.0, abs=0.01)

    def test_sequence_numbers_increase(self, server, client):
        client.sendto(b"SUB", server.state_address)
        seqs = []
        for _ in range(4):
            server.tick_once()
        client.settimeout(1.0)
        while len(seqs) < 3:
            data, _ = client.recvfrom(65536)
            message = decode(data)
            if message.kind == "STATE":
                seqs.append(message.get_int("seq"))
        assert seqs == sorted(seqs)
        assert len(set(seqs)) == len(seqs)

    def test_scenario_info_carries_field_geometry(self, server, client):
        client.sendto(b"SUB", server.state_address)
        server.tick_once()
        data, _ = client.recvfrom(65536)
        info = decode(data)
        assert info.kind == "SCENARIO"
        assert info.get("name") == "empty"
        assert info.get_float("fhx") == server.config.field_half_x
        assert info.get_float("fhy") == server.config.field_half_y

    def test_silent_subscriber_expires(self, server, client):
        client.sendto(b"SUB", server.state_address)
        server.tick_once()
        addr = next(iter(server._subscribers))
        server._subscribers[addr] = time.monotonic() - SUBSCRIBER_TTL - 1.0
        server.tick_once()
        assert addr not in server._subscribers


class TestScenarioSwitch:
    def test_switch_rebuilds_the_world(self, server, client):
        msg = Message("SCENARIO", {"session": "s1", "req": "1"}).put("name", "maze")
        reply = exchange(server, client, msg)
        assert reply.kind == "ACK"
        assert server.scenario.name == "maze"
        assert len(server.world.obstacles) == 12
        # the maze broadcast includes the obstacle list
        info = server._scenario_info()
        assert info.get("obs") is not None

    def test_unknown_scenario_rejected(self, server, client):
        msg = Message("SCENARIO", {"session": "s1", "req": "1"}).put("name", "nope")
        reply = exchange(server, client, msg)
        assert reply.kind == "REJECT"
        assert reply.get("reason") == "unknown-scenario"

    def test_switch_resets_time_and_guard(self, server, client):
        for _ in range(10):
            server.tick_once()
        assert server.world.time > 0.1
        exchange(
            server,
            client,
            Message("SCENARIO", {"session": "s1", "req": "1"}).put("name", "empty"),
        )
        # Time restarted (the exchange itself ran one tick), and the old
        # guard state is gone: the fresh slot is in its halted default.
        assert server.world.time == pytest.approx(server.config.period)
        assert server.guard.slots[0].halted
        assert server.guard.slots[0].active is None


class TestPacedRun:
    def test_run_for_duration_advances_sim_time(self, server):
        start = server.world.time
        wall_start = time.monotonic()
        server.run(duration=0.25)
        wall = time.monotonic() - wall_start
        assert server.world.time - start == pytest.approx(0.25, abs=0.02)
        # paced: simulated time tracks wall time
        assert wall == pytest.approx(0.25, abs=0.15)

    def test_fast_mode_outruns_the_wall_clock(self):
        server = SimServer("empty", ingress_port=0, state_port=0, fast=True)
        try:
            wall_start = time.monotonic()
            server.run(duration=5.0)
            wall = time.monotonic() - wall_start
            assert wall < 2.0
        finally:
            server.close()
