"""Datagram envelope codec and the reliable-command retry loop."""

import socket
import threading
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robojs.wire import (
    MAX_DATAGRAM,
    LossyProxy,
    Message,
    TransportTimeout,
    WireError,
    decode,
    decode_text,
    encode,
    encode_text,
    new_session_id,
    open_udp_socket,
    reliable_command,
)


class TestEnvelope:
    def test_round_trip_basic(self):
        msg = Message("COMMAND", {"session": "abc", "req": "1", "verb": "halt"})
        assert decode(encode(msg)) == msg

    def test_round_trip_escaped_values(self):
        msg = Message("REJECT", {"reason": "ball is 1.50 m away; kicks reach 0.25 m."})
        out = decode(encode(msg))
        assert out.fields["reason"] == msg.fields["reason"]

    def test_escape_characters_survive(self):
        tricky = "a=b %20 c\nd\re f"
        out = decode(encode(Message("ACK", {"v": tricky})))
        assert out.fields["v"] == tricky

    def test_float_fields_round_trip_exactly(self):
        msg = Message("STATE").put("x", 0.1 + 0.2).put("t", 1 / 3)
        out = decode(encode(msg))
        assert out.get_float("x") == 0.1 + 0.2
        assert out.get_float("t") == 1 / 3

    def test_put_bool_and_int(self):
        msg = Message("ACK").put("ok", True).put("n", 42)
        assert msg.fields == {"ok": "true", "n": "42"}
        assert decode(encode(msg)).get_int("n") == 42

    def test_require_missing_field(self):
        with pytest.raises(WireError, match="missing field"):
            Message("ACK").require("req")

    def test_get_float_rejects_garbage(self):
        with pytest.raises(WireError, match="not a number"):
            Message("ACK", {"x": "soup"}).get_float("x")

    def test_oversized_datagram_rejected(self):
        msg = Message("STATE", {"blob": "x" * (MAX_DATAGRAM + 1)})
        with pytest.raises(WireError, match="exceeds"):
            encode(msg)

    def test_non_ascii_rejected_on_udp(self):
        with pytest.raises(WireError, match="ASCII"):
            encode(Message("ACK", {"v": "café"}))

    def test_text_codec_allows_unicode(self):
        msg = Message("ACK", {"v": "café"})
        assert decode_text(encode_text(msg)) == msg

    def test_bad_kind_rejected(self):
        with pytest.raises(WireError):
            encode(Message("ack"))
        with pytest.raises(WireError):
            decode(b"ack x=1")

    def test_empty_datagram_rejected(self):
        with pytest.raises(WireError, match="empty"):
            decode(b"")

    def test_field_without_equals_rejected(self):
        with pytest.raises(WireError, match="key=value"):
            decode(b"ACK justaword")

    def test_truncated_escape_rejected(self):
        with pytest.raises(WireError):
            decode(b"ACK v=%2")

    @given(
        st.dictionaries(
            st.text(
                alphabet=st.characters(min_codepoint=97, max_codepoint=122),
                min_size=1,
                max_size=8,
            ),
            st.text(
                alphabet=st.characters(min_codepoint=32, max_codepoint=126),
                max_size=40,
            ),
            max_size=6,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_round_trip_property(self, fields):
        msg = Message("STATE", fields)
        assert decode(encode(msg)) == msg


class _ScriptedServer:
    """Minimal UDP command server: dedupes on (session, req), ACKs each
    command once, and can be told to drop the first N fresh commands to
    force client retries."""

    def __init__(self):
        self.sock = open_udp_socket()
        self.sock.settimeout(0.05)
        self.address = self.sock.getsockname()
        self.executed: list[tuple[str, str]] = []
        self.replies: dict[tuple[str, str], Message] = {}
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, daemon=True)

    def start(self):
        self._thread.start()
        return self

    def close(self):
        self._stop.set()
        self._thread.join(timeout=2.0)
        self.sock.close()

    def _run(self):
        while not self._stop.is_set():
            try:
                data, addr = self.sock.recvfrom(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            try:
                msg = decode(data)
            except WireError:
                continue
            if msg.kind != "COMMAND":
                continue
            key = (msg.require("session"), msg.require("req"))
            reply = self.replies.get(key)
            if reply is None:
                self.executed.append(key)
                reply = Message(
                    "ACK", {"session": key[0], "req": key[1], "status": "ok"}
                )
                self.replies[key] = reply
            self.sock.sendto(encode(reply), addr)


class TestReliableCommand:
    def test_exactly_once_over_lossy_link(self):
        server = _ScriptedServer().start()
        proxy = LossyProxy(server.address, loss=0.2, seed=11).start()
        client = open_udp_socket()
        session = new_session_id()
        try:
            for req in range(50):
                msg = Message(
                    "COMMAND",
                    {"session": session, "req": str(req), "verb": "halt"},
                )
                reply = reliable_command(client, proxy.address, msg, timeout=5.0)
                assert reply.kind == "ACK"
                assert reply.get("req") == str(req)
        finally:
            client.close()
            proxy.close()
            server.close()
        # The link dropped traffic, yet every command ran exactly once.
        assert proxy.dropped > 0
        assert server.executed == [(session, str(r)) for r in range(50)]

    def test_stray_replies_ignored(self):
        server = _ScriptedServer().start()
        client = open_udp_socket()
        try:
            # Seed the client socket with a stray reply for a different req.
            stray = Message("ACK", {"session": "nope", "req": "9", "status": "ok"})
            server.sock.sendto(encode(stray), client.getsockname())
            msg = Message("COMMAND", {"session": "s1", "req": "0"})
            reply = reliable_command(client, server.address, msg, timeout=5.0)
            assert (reply.get("session"), reply.get("req")) == ("s1", "0")
        finally:
            client.close()
            server.close()

    def test_offline_server_times_out_at_two_seconds(self):
        client = open_udp_socket()
        # A bound-but-silent socket stands in for an unreachable server.
        black_hole = open_udp_socket()
        try:
            msg = Message("COMMAND", {"session": "s", "req": "0"})
            start = time.monotonic()
            with pytest.raises(TransportTimeout):
                reliable_command(
                    client, black_hole.getsockname(), msg
                )
            elapsed = time.monotonic() - start
            assert elapsed == pytest.approx(2.0, abs=0.2)
        finally:
            client.close()
            black_hole.close()

    def test_requires_session_and_req(self):
        client = open_udp_socket()
        try:
            with pytest.raises(WireError):
                reliable_command(
                    client, ("127.0.0.1", 1), Message("COMMAND", {"req": "0"})
                )
        finally:
            client.close()
