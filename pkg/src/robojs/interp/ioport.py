"""The boundary between the interpreter and the robot world.

The interpreter runs as one logical task; robot calls suspend it until the
I/O side replies. `IoPort.call` is that suspension point: it receives one
request, blocks the program, and returns one reply. At most one request is
ever outstanding. A stop request wakes any waiting call immediately.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Protocol


class StopToken:
    """Cooperative cancellation flag shared by the program and its owner."""

    def __init__(self) -> None:
        self._event = threading.Event()

    def stop(self) -> None:
        self._event.set()

    def stopped(self) -> bool:
        return self._event.is_set()

    def wait(self, timeout: float) -> bool:
        return self._event.wait(timeout)


@dataclass(frozen=True)
class IoRequest:
    request_id: int
    api_name: str  # e.g. "robot.moveTo"
    args: tuple[Any, ...]


@dataclass(frozen=True)
class IoReply:
    request_id: int
    value: Any = None  # None means the call produced no value
    error: str | None = None  # rejection reason or failure description
    error_category: str = "robot-error"


class IoPort(Protocol):
    def call(self, request: IoRequest, stop: StopToken) -> IoReply | None:
        """Serve one blocking robot call.

        Returns the reply, or None if the stop token fired while waiting.
        """
        ...


@dataclass
class StubIoPort:
    """Replies instantly; used by tests and by runs without a simulator.

    Sense calls return values from `sense_values` (a name-keyed list that
    is consumed one value per call, then repeats its last entry) or 0.
    """

    sense_values: dict[str, list[float]] = field(default_factory=dict)
    requests: list[IoRequest] = field(default_factory=list)

    def call(self, request: IoRequest, stop: StopToken) -> IoReply | None:
        if stop.stopped():
            return None
        self.requests.append(request)
        name = request.api_name.rsplit(".", 1)[-1]
        if name.startswith("get"):
            queue = self.sense_values.get(name)
            if queue:
                value = queue.pop(0) if len(queue) > 1 else queue[0]
            else:
                value = 0.0
            return IoReply(request.request_id, value=float(value))
        return IoReply(request.request_id)
