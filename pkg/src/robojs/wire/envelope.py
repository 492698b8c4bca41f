"""Datagram envelope codec.

Every datagram is one line of ASCII text: a message kind followed by
`key=value` fields separated by single spaces. Values are percent-escaped
so they can carry spaces, equals signs, percent signs, and newlines.
Floats are encoded with `repr`, which round-trips every IEEE double.

The format is deliberately human-readable: a captured datagram can be
read, edited, and replayed with standard tools. Messages must fit in one
UDP payload; the codec enforces a 1400-byte ceiling so datagrams survive
common MTU limits without fragmentation.

Kinds used by the platform:

- COMMAND: one robot command (client -> server)
- ACK / REJECT: the server's reply to a COMMAND
- STATE: one world snapshot (server -> subscribers)
- SCENARIO: load or reset a scenario (client -> server)
- HALT: stop every robot now (client -> server)
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_DATAGRAM = 1400

KINDS = ("COMMAND", "ACK", "REJECT", "STATE", "SCENARIO", "HALT")

_ESCAPES = {
    " ": "%20",
    "%": "%25",
    "=": "%3D",
    "\n": "%0A",
    "\r": "%0D",
}


class WireError(ValueError):
    """A datagram that cannot be encoded or decoded."""


def escape(value: str) -> str:
    if not any(ch in _ESCAPES for ch in value):
        return value
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape(value: str) -> str:
    if "%" not in value:
        return value
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "%":
            code = value[i + 1 : i + 3]
            if len(code) != 2:
                raise WireError(f"truncated escape in {value!r}")
            try:
                out.append(chr(int(code, 16)))
            except ValueError as exc:
                raise WireError(f"bad escape %{code} in {value!r}") from exc
            i += 3
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass
class Message:
    kind: str
    fields: dict[str, str] = field(default_factory=dict)

    # -- typed field helpers ------------------------------------------------

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.fields.get(key, default)

    def require(self, key: str) -> str:
        try:
            return self.fields[key]
        except KeyError:
            raise WireError(f"{self.kind} message is missing field {key!r}") from None

    def get_float(self, key: str) -> float:
        raw = self.require(key)
        try:
            return float(raw)
        except ValueError as exc:
            raise WireError(f"field {key}={raw!r} is not a number") from exc

    def get_int(self, key: str) -> int:
        raw = self.require(key)
        try:
            return int(raw)
        except ValueError as exc:
            raise WireError(f"field {key}={raw!r} is not an integer") from exc

    def put(self, key: str, value: object) -> "Message":
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        self.fields[key] = text
        return self


def encode_text(message: Message) -> str:
    """Encode as one line of text (WebSocket frames; may carry unicode)."""
    if not message.kind or not all(
        ch.isupper() or ch == "_" for ch in message.kind
    ):
        raise WireError(f"bad message kind {message.kind!r}")
    parts = [message.kind]
    for key, value in message.fields.items():
        if not key or any(ch in _ESCAPES for ch in key):
            raise WireError(f"bad field name {key!r}")
        parts.append(f"{key}={escape(value)}")
    return " ".join(parts)


def encode(message: Message) -> bytes:
    """Encode as one UDP payload (ASCII, at most MAX_DATAGRAM bytes)."""
    try:
        data = encode_text(message).encode("ascii", errors="strict")
    except UnicodeEncodeError as exc:
        raise WireError("datagram is not ASCII") from exc
    if len(data) > MAX_DATAGRAM:
        raise WireError(f"datagram of {len(data)} bytes exceeds {MAX_DATAGRAM}")
    return data


def decode_text(text: str) -> Message:
    text = text.rstrip("\r\n")
    if not text:
        raise WireError("empty datagram")
    parts = text.split(" ")
    kind = parts[0]
    if not kind or not all(ch.isupper() or ch == "_" for ch in kind):
        raise WireError(f"unknown message kind {kind!r}")
    fields: dict[str, str] = {}
    for part in parts[1:]:
        if not part:
            raise WireError("empty field (double space?)")
        key, sep, value = part.partition("=")
        if not sep or not key:
            raise WireError(f"field {part!r} is not key=value")
        fields[key] = unescape(value)
    return Message(kind, fields)


def decode(data: bytes) -> Message:
    try:
        return decode_text(data.decode("ascii"))
    except UnicodeDecodeError as exc:
        raise WireError("datagram is not ASCII") from exc
