"""Scenario definitions: initial layouts, obstacles, and adversary robots.

A scenario is data: robot poses, the ball, optional obstacles, and
optional adversary policies (scripted opponents driven through the same
guard as every other command source). Scenarios load from YAML files or
from the built-in presets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from ..guard.config import SafetyConfig
from .world import BALL_RADIUS, BallState, Obstacle, RobotState, WorldState


@dataclass(frozen=True)
class AdversarySpec:
    robot_id: int
    policy: str  # "chase" | "goalkeeper" | "striker"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    robots: tuple[tuple[int, float, float, float], ...]  # id, x, y, theta
    ball: tuple[float, float] = (0.0, 0.0)
    obstacles: tuple[tuple[float, float, float], ...] = ()  # x, y, radius
    adversaries: tuple[AdversarySpec, ...] = ()

    def build_world(self) -> WorldState:
        world = WorldState()
        for rid, x, y, theta in self.robots:
            world.robots.append(RobotState(rid, x=x, y=y, theta=theta))
        world.ball = BallState(x=self.ball[0], y=self.ball[1])
        world.obstacles = [Obstacle(x, y, r) for x, y, r in self.obstacles]
        return world


class ScenarioError(ValueError):
    pass


def validate_scenario(scenario: Scenario, config: SafetyConfig | None = None) -> None:
    """Reject layouts that start outside the field or inside the safety margin."""
    cfg = config or SafetyConfig()
    seen: set[int] = set()
    placed: list[tuple[int, float, float]] = []
    for rid, x, y, _theta in scenario.robots:
        if rid in seen:
            raise ScenarioError(f"{scenario.name}: duplicate robot id {rid}")
        seen.add(rid)
        if abs(x) > cfg.inset_x or abs(y) > cfg.inset_y:
            raise ScenarioError(
                f"{scenario.name}: robot {rid} at ({x}, {y}) is outside the field"
            )
        for other_id, ox, oy in placed:
            dist = math.hypot(x - ox, y - oy)
            if dist < cfg.min_center_distance:
                raise ScenarioError(
                    f"{scenario.name}: robots {other_id} and {rid} start "
                    f"{dist:.3f} m apart; the minimum is "
                    f"{cfg.min_center_distance:.3f} m"
                )
        placed.append((rid, x, y))
    bx, by = scenario.ball
    if abs(bx) > cfg.field_half_x - BALL_RADIUS or abs(by) > cfg.field_half_y - BALL_RADIUS:
        raise ScenarioError(f"{scenario.name}: ball at ({bx}, {by}) is outside")
    for x, y, r in scenario.obstacles:
        for rid, ox, oy in placed:
            if math.hypot(x - ox, y - oy) < r + cfg.robot_radius + cfg.separation_margin:
                raise ScenarioError(
                    f"{scenario.name}: obstacle at ({x}, {y}) overlaps robot {rid}"
                )
    for spec in scenario.adversaries:
        if spec.robot_id not in seen:
            raise ScenarioError(
                f"{scenario.name}: adversary references unknown robot {spec.robot_id}"
            )
        if spec.policy not in ("chase", "goalkeeper", "striker"):
            raise ScenarioError(
                f"{scenario.name}: unknown adversary policy {spec.policy!r}"
            )


def scenario_from_dict(data: dict, name: str = "custom") -> Scenario:
    robots = []
    for entry in data.get("robots", []):
        theta = math.radians(float(entry.get("theta_deg", 0.0)))
        robots.append(
            (int(entry["id"]), float(entry["x"]), float(entry["y"]), theta)
        )
    ball = data.get("ball", {})
    obstacles = tuple(
        (float(o["x"]), float(o["y"]), float(o.get("radius", 0.09)))
        for o in data.get("obstacles", [])
    )
    adversaries = tuple(
        AdversarySpec(
            int(a["robot"]), str(a["policy"]), dict(a.get("params", {}))
        )
        for a in data.get("adversaries", [])
    )
    scenario = Scenario(
        name=str(data.get("name", name)),
        description=str(data.get("description", "")),
        robots=tuple(robots),
        ball=(float(ball.get("x", 0.0)), float(ball.get("y", 0.0))),
        obstacles=obstacles,
        adversaries=adversaries,
    )
    validate_scenario(scenario)
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    import yaml

    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: scenario file must be a mapping")
    return scenario_from_dict(data, name=path.stem)


# ----------------------------------------------------------------------
# presets

def _maze_obstacles() -> tuple[tuple[float, float, float], ...]:
    obstacles: list[tuple[float, float, float]] = []
    # two walls with offset gaps, built from 0.09 m pillars
    for y in (-1.05, -0.75, -0.45, -0.15, 0.15, 0.45):
        obstacles.append((-0.6, y, 0.09))
    for y in (-0.45, -0.15, 0.15, 0.45, 0.75, 1.05):
        obstacles.append((0.6, y, 0.09))
    return tuple(obstacles)


PRESETS: dict[str, Scenario] = {}


def _preset(scenario: Scenario) -> Scenario:
    validate_scenario(scenario)
    PRESETS[scenario.name] = scenario
    return scenario


_preset(
    Scenario(
        name="empty",
        description="One robot, one ball, open field.",
        robots=((0, -1.5, -0.9, 0.0),),
        ball=(0.0, 0.0),
    )
)

_preset(
    Scenario(
        name="maze",
        description="Drive from the lower-left corner to the ball through two walls.",
        robots=((0, -1.5, -0.9, 0.0),),
        ball=(1.5, 0.9),
        obstacles=_maze_obstacles(),
    )
)

_preset(
    Scenario(
        name="collection",
        description="Fetch the ball and dribble it back to the home corner.",
        robots=((0, -1.5, -0.9, 0.0),),
        ball=(1.2, 0.6),
    )
)

_preset(
    Scenario(
        name="tag",
        description="An adversary chases your robot; stay away from it.",
        robots=((0, -1.2, 0.0, 0.0), (1, 1.2, 0.0, math.pi)),
        ball=(0.0, -1.0),
        adversaries=(AdversarySpec(1, "chase", {"target": 0}),),
    )
)

_preset(
    Scenario(
        name="penalty",
        description="Score past a goalkeeper from the penalty spot.",
        robots=((0, 0.5, 0.0, 0.0), (1, 1.6, 0.0, math.pi)),
        ball=(0.9, 0.0),
        adversaries=(AdversarySpec(1, "goalkeeper", {"goal_x": 1.65}),),
    )
)

_preset(
    Scenario(
        name="soccer-2v2",
        description="Two against two; opponents play a striker and a goalkeeper.",
        robots=(
            (0, -1.2, -0.4, 0.0),
            (1, -1.2, 0.4, 0.0),
            (2, 1.2, -0.4, math.pi),
            (3, 1.5, 0.4, math.pi),
        ),
        ball=(0.0, 0.0),
        adversaries=(
            AdversarySpec(2, "striker", {"goal_x": -1.65}),
            AdversarySpec(3, "goalkeeper", {"goal_x": 1.65}),
        ),
    )
)


def get_scenario(name: str) -> Scenario:
    try:
        return PRESETS[name]
    except KeyError:
        raise ScenarioError(
            f"unknown scenario {name!r}; presets: {', '.join(sorted(PRESETS))}"
        ) from None
