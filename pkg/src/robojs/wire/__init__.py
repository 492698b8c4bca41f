"""Datagram wire protocol: envelope codec, reliable transport, browser bridge."""

from .envelope import (
    KINDS,
    MAX_DATAGRAM,
    Message,
    WireError,
    decode,
    decode_text,
    encode,
    encode_text,
    escape,
    unescape,
)
from .transport import (
    COMMAND_TIMEOUT,
    RESEND_INTERVAL,
    LossyProxy,
    TransportTimeout,
    new_session_id,
    open_udp_socket,
    reliable_command,
)

# The bridge sits above the robot API layer, which itself uses this
# package's codec, so an eager import here would close an import cycle.
# It loads on first attribute access instead.
_LAZY = {
    "BridgeServer": "bridge",
    "DEFAULT_BRIDGE_PORT": "bridge",
    "FileStore": "bridge",
}


def __getattr__(name: str):
    module_name = _LAZY.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    return getattr(module, name)

__all__ = [
    "BridgeServer",
    "COMMAND_TIMEOUT",
    "DEFAULT_BRIDGE_PORT",
    "FileStore",
    "KINDS",
    "LossyProxy",
    "MAX_DATAGRAM",
    "Message",
    "RESEND_INTERVAL",
    "TransportTimeout",
    "WireError",
    "decode",
    "decode_text",
    "encode",
    "encode_text",
    "escape",
    "new_session_id",
    "open_udp_socket",
    "reliable_command",
    "unescape",
]
