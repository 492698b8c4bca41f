"""Safety limits for the command guard.

All lengths are meters, speeds meters per second, angles degrees unless a
field name says radians. The defaults describe a 3.6 m x 2.4 m field with
0.18 m-diameter robots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class SafetyConfig:
    # hard actuation limits
    max_speed: float = 1.0  # m/s, per robot, enforced on every setpoint
    max_accel: float = 2.0  # m/s^2, the drive's acceleration/braking limit
    max_omega_deg: float = 270.0  # deg/s

    # watchdog
    command_timeout: float = 5.0  # s without an accepted command -> halt

    # geometry
    field_half_x: float = 1.8
    field_half_y: float = 1.2
    robot_radius: float = 0.09
    separation_margin: float = 0.05  # beyond touching, between robot shells

    # kicking
    kick_max_dist: float = 0.25  # ball center to robot center
    kick_cone_deg: float = 30.0  # half-angle around the robot's heading
    kick_speed_per_power: float = 2.0  # ball speed = power * this

    # control loop
    period: float = 1.0 / 60.0  # s per control/physics step
    kp_pos: float = 3.0  # proportional gain, position error -> speed
    kp_ang: float = 4.0  # proportional gain, heading error -> turn rate
    accel_headroom: float = 0.8  # fraction of max_accel used when planning
    arrive_dist: float = 0.01  # m, considered "at the target"
    arrive_deg: float = 0.5  # deg, considered "facing the target"

    @property
    def min_center_distance(self) -> float:
        """Smallest allowed distance between robot centers."""
        return 2.0 * self.robot_radius + self.separation_margin

    @property
    def max_omega(self) -> float:
        return math.radians(self.max_omega_deg)

    @property
    def kick_cone(self) -> float:
        return math.radians(self.kick_cone_deg)

    @property
    def inset_x(self) -> float:
        """Largest |x| a robot center may reach (walls are hard)."""
        return self.field_half_x - self.robot_radius

    @property
    def inset_y(self) -> float:
        return self.field_half_y - self.robot_radius


def config_from_dict(data: dict) -> SafetyConfig:
    known = {f for f in SafetyConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown safety config keys: {sorted(unknown)}")
    values = {}
    for key, value in data.items():
        try:
            values[key] = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"safety config key {key!r} must be a number, got {value!r}")
    return SafetyConfig(**values)


def load_config(path: str | Path) -> SafetyConfig:
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: safety config must be a mapping")
    return config_from_dict(data)
