"""World state: the positions and velocities everything else reads.

Plain data, SI units, no behavior. The x axis points toward the right
goal, y toward the top wall, the origin is the field center. Headings are
radians, counter-clockwise, zero along +x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

BALL_RADIUS = 0.021


@dataclass
class RobotState:
    robot_id: int
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    dribbling: bool = False

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)

    def copy(self) -> "RobotState":
        return replace(self)


@dataclass
class BallState:
    x: float = 0.0
    y: float = 0.0
    vx: float = 0.0
    vy: float = 0.0

    @property
    def speed(self) -> float:
        return math.hypot(self.vx, self.vy)

    def copy(self) -> "BallState":
        return replace(self)


@dataclass
class Obstacle:
    """A static circular obstacle (maze walls are rows of these)."""

    x: float
    y: float
    radius: float


@dataclass
class Actuation:
    """Per-robot setpoints for one physics step, as issued by the guard."""

    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    dribble: bool = False
    kick_power: float | None = None
    hard_stop: bool = False


@dataclass
class WorldState:
    time: float = 0.0
    robots: list[RobotState] = field(default_factory=list)
    ball: BallState = field(default_factory=BallState)
    obstacles: list[Obstacle] = field(default_factory=list)

    def robot(self, robot_id: int) -> RobotState | None:
        for r in self.robots:
            if r.robot_id == robot_id:
                return r
        return None

    def copy(self) -> "WorldState":
        return WorldState(
            self.time,
            [r.copy() for r in self.robots],
            self.ball.copy(),
            list(self.obstacles),
        )


def wrap_angle(theta: float) -> float:
    """Map any angle to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi
