"""Simulator daemon: datagram endpoints, optional IDE bridge.

``robosim`` starts the simulation server on the given ports and, with
``--bridge``, a WebSocket bridge for browser clients in the same process.
``--fast`` decouples the simulation from the wall clock (useful for batch
runs); ``--duration`` stops after that many simulated seconds instead of
running until interrupted.
"""

from __future__ import annotations

import argparse
import signal
import sys
import threading

from ..guard.config import SafetyConfig, load_config
from .scenarios import PRESETS, ScenarioError, get_scenario, load_scenario
from .server import SimServer


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robosim", description="2D robot soccer simulator")
    parser.add_argument(
        "--scenario",
        default="empty",
        help=f"preset name ({', '.join(sorted(PRESETS))}) or a YAML file path",
    )
    parser.add_argument("--config", help="safety/physics configuration YAML")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--ingress-port", type=int, default=17001)
    parser.add_argument("--state-port", type=int, default=17002)
    parser.add_argument(
        "--fast", action="store_true", help="run unpaced (no wall-clock sleep)"
    )
    parser.add_argument(
        "--duration",
        type=float,
        default=None,
        help="stop after this many simulated seconds (default: run until Ctrl-C)",
    )
    parser.add_argument("--bridge", action="store_true", help="serve the IDE bridge")
    parser.add_argument("--bridge-port", type=int, default=17080)
    parser.add_argument("--web-root", help="static files served by the bridge")
    parser.add_argument(
        "--files-root",
        default="robojs-workspace",
        help="program revision storage for IDE clients",
    )
    parser.add_argument("--account", default="student", help="workspace account name")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    config = SafetyConfig()
    if args.config:
        try:
            config = load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"robosim: bad config: {exc}", file=sys.stderr)
            return 2

    try:
        if args.scenario in PRESETS:
            scenario = get_scenario(args.scenario)
        else:
            scenario = load_scenario(args.scenario)
    except (OSError, ScenarioError, ValueError) as exc:
        print(f"robosim: bad scenario: {exc}", file=sys.stderr)
        return 2

    server = SimServer(
        scenario,
        config=config,
        host=args.host,
        ingress_port=args.ingress_port,
        state_port=args.state_port,
        fast=args.fast,
    )
    print(
        f"robosim: scenario '{scenario.name}', commands on "
        f"{server.ingress_address[0]}:{server.ingress_address[1]}, state on "
        f"{server.state_address[0]}:{server.state_address[1]}"
        + (" (fast)" if args.fast else "")
    )

    bridge = None
    if args.bridge:
        from ..wire.bridge import BridgeServer

        bridge = BridgeServer(
            server.ingress_address,
            server.state_address,
            host=args.host,
            port=args.bridge_port,
            web_root=args.web_root,
            files_root=args.files_root,
            account=args.account,
        )
        bridge.start()
        print(
            f"robosim: bridge at http://{bridge.address[0]}:{bridge.address[1]}/"
            f" (WebSocket endpoint /ws)"
        )

    stop_event = threading.Event()

    def _on_signal(_signum, _frame):
        stop_event.set()

    signal.signal(signal.SIGINT, _on_signal)
    signal.signal(signal.SIGTERM, _on_signal)

    try:
        if args.duration is not None:
            server.run(args.duration)
        else:
            server.start()
            while not stop_event.is_set():
                stop_event.wait(0.5)
    finally:
        if bridge is not None:
            bridge.stop()
        server.stop()
        server.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
