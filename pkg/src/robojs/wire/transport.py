"""Datagram transport: reliable commands over a lossy link.

UDP loses, duplicates, and reorders datagrams; the platform restores
"every command runs exactly once" with two cooperating pieces:

- The client (`reliable_command`) tags every command with a session id
  and a per-session request number, then resends every `interval` seconds
  until a reply with the same request number arrives or `timeout` elapses.
- The server deduplicates on (session, request) and answers duplicates by
  resending the cached reply without re-executing the command.

`LossyProxy` is a test harness: a UDP forwarder that drops a seeded,
reproducible fraction of datagrams in each direction, so the retry logic
is exercised against real sockets.
"""

from __future__ import annotations

import random
import secrets
import socket
import threading
import time

from .envelope import Message, WireError, decode, encode

RESEND_INTERVAL = 0.1  # s between retries
COMMAND_TIMEOUT = 2.0  # s until the command is reported undeliverable


class TransportTimeout(Exception):
    """No reply arrived within the command timeout; the peer looks offline."""


def new_session_id() -> str:
    return secrets.token_hex(4)


def open_udp_socket(port: int = 0, host: str = "127.0.0.1") -> socket.socket:
    sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    sock.bind((host, port))
    return sock


def reliable_command(
    sock: socket.socket,
    server: tuple[str, int],
    message: Message,
    *,
    timeout: float = COMMAND_TIMEOUT,
    interval: float = RESEND_INTERVAL,
) -> Message:
    """Send one command until its reply arrives; raise TransportTimeout.

    `message` must already carry `session` and `req` fields; the reply is
    matched on them. Stray datagrams (old replies, other traffic) are
    ignored and do not consume the timeout.
    """
    session = message.require("session")
    req = message.require("req")
    payload = encode(message)
    deadline = time.monotonic() + timeout
    while True:
        now = time.monotonic()
        if now >= deadline:
            raise TransportTimeout(
                f"no reply to request {req} within {timeout:.1f} s"
            )
        sock.sendto(payload, server)
        resend_at = min(now + interval, deadline)
        while True:
            remaining = resend_at - time.monotonic()
            if remaining <= 0:
                break
            sock.settimeout(remaining)
            try:
                data, _addr = sock.recvfrom(65536)
            except socket.timeout:
                break
            except OSError:
                break
            try:
                reply = decode(data)
            except WireError:
                continue
            if (
                reply.kind in ("ACK", "REJECT")
                and reply.get("session") == session
                and reply.get("req") == req
            ):
                sock.settimeout(None)
                return reply


class LossyProxy:
    """UDP forwarder dropping a seeded fraction of datagrams each way.

    Listens on its own port; datagrams from anyone except the upstream
    server are forwarded to the server, datagrams from the server go back
    to the most recent other sender. One client at a time, which is all
    the tests need.
    """

    def __init__(
        self,
        upstream: tuple[str, int],
        loss: float = 0.2,
        seed: int = 0,
        host: str = "127.0.0.1",
    ):
        self.upstream = upstream
        self.loss = loss
        self.rng = random.Random(seed)
        self.sock = open_udp_socket(0, host)
        self.sock.settimeout(0.05)
        self.port = self.sock.getsockname()[1]
        self.address = (host, self.port)
        self.client_addr: tuple[str, int] | None = None
        self.forwarded = 0
        self.dropped = 0
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, daemon=True)

    def start(self) -> "LossyProxy":
        self._thread.start()
        return self

    def close(self) -> None:
        self._stop.set()
        self._thread.join(timeout=2.0)
        self.sock.close()

    def _run(self) -> None:
        while not self._stop.is_set():
            try:
                data, addr = self.sock.recvfrom(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            if self.rng.random() < self.loss:
                self.dropped += 1
                continue
            self.forwarded += 1
            if addr == self.upstream:
                if self.client_addr is not None:
                    self.sock.sendto(data, self.client_addr)
            else:
                self.client_addr = addr
                self.sock.sendto(data, self.upstream)
