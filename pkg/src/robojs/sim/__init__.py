"""Fixed-timestep 2D simulator: world model, scenarios, UDP server."""

from .model import (
    BALL_FRICTION,
    DRIBBLE_CONE,
    DRIBBLE_RANGE,
    ROBOT_RESTITUTION,
    WALL_RESTITUTION,
    Simulator,
)
from .scenarios import (
    PRESETS,
    AdversarySpec,
    Scenario,
    ScenarioError,
    get_scenario,
    load_scenario,
    scenario_from_dict,
    validate_scenario,
)
from .world import (
    BALL_RADIUS,
    Actuation,
    BallState,
    Obstacle,
    RobotState,
    WorldState,
    wrap_angle,
)


# server and adversary drive robots through the guard, and the guard's own
# modules import sim.world, so eager imports here would close an import
# cycle. They load on first attribute access instead.
_LAZY = {
    "AdversaryDriver": "adversary",
    "DEFAULT_INGRESS_PORT": "server",
    "DEFAULT_STATE_PORT": "server",
    "REPLY_CACHE_SIZE": "server",
    "SCENARIO_REFRESH": "server",
    "SUBSCRIBER_TTL": "server",
    "SimServer": "server",
}


def __getattr__(name: str):
    module_name = _LAZY.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    return getattr(module, name)

__all__ = [
    "Actuation",
    "AdversaryDriver",
    "AdversarySpec",
    "BALL_FRICTION",
    "BALL_RADIUS",
    "BallState",
    "DEFAULT_INGRESS_PORT",
    "DEFAULT_STATE_PORT",
    "DRIBBLE_CONE",
    "DRIBBLE_RANGE",
    "Obstacle",
    "PRESETS",
    "REPLY_CACHE_SIZE",
    "ROBOT_RESTITUTION",
    "RobotState",
    "SCENARIO_REFRESH",
    "SUBSCRIBER_TTL",
    "Scenario",
    "ScenarioError",
    "SimServer",
    "Simulator",
    "WALL_RESTITUTION",
    "WorldState",
    "get_scenario",
    "load_scenario",
    "scenario_from_dict",
    "validate_scenario",
    "wrap_angle",
]
