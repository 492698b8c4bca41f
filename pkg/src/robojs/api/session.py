"""Client-side robot session: world mirror and API-call translation.

The session holds what one program knows about the world — the latest
state snapshot and which robot it controls — and translates each layered
API call (`robot.moveForward()`, `robot.moveToXY(x, y)`, ...) into one
guarded wire command plus a completion condition.

Units at this boundary are student-facing: meters and degrees. The grid
commands work in whole cells. Internally everything becomes meters and
radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..guard.commands import (
    Block,
    CatchBall,
    Dribble,
    Kick,
    MoveTo,
    Skill,
    TurnTo,
)
from ..sim.world import wrap_angle
from ..wire.envelope import Message
from . import grid

STALE_AFTER = 1.0  # s without a state frame before senses refuse to answer


class ApiError(Exception):
    """A robot API call that cannot proceed; reported as a dynamic finding."""

    def __init__(self, message: str, category: str = "robot-error"):
        super().__init__(message)
        self.category = category


@dataclass
class RobotSnapshot:
    x: float
    y: float
    theta: float
    vx: float
    vy: float
    omega: float
    dribbling: bool
    halted: bool


@dataclass
class WorldSnapshot:
    time: float
    seq: int
    robots: dict[int, RobotSnapshot] = field(default_factory=dict)
    ball_x: float = 0.0
    ball_y: float = 0.0
    ball_vx: float = 0.0
    ball_vy: float = 0.0


def parse_state(message: Message) -> WorldSnapshot:
    snap = WorldSnapshot(time=message.get_float("t"), seq=message.get_int("seq"))
    snap.ball_x = message.get_float("b.x")
    snap.ball_y = message.get_float("b.y")
    snap.ball_vx = message.get_float("b.vx")
    snap.ball_vy = message.get_float("b.vy")
    for key in message.fields:
        if not key.endswith(".x") or not key.startswith("r"):
            continue
        rid_text = key[1:-2]
        if not rid_text.isdigit():
            continue
        rid = int(rid_text)
        p = f"r{rid}"
        snap.robots[rid] = RobotSnapshot(
            x=message.get_float(f"{p}.x"),
            y=message.get_float(f"{p}.y"),
            theta=message.get_float(f"{p}.th"),
            vx=message.get_float(f"{p}.vx"),
            vy=message.get_float(f"{p}.vy"),
            omega=message.get_float(f"{p}.w"),
            dribbling=message.get(f"{p}.drb") == "true",
            halted=message.get(f"{p}.halt") == "true",
        )
    return snap


@dataclass
class Completion:
    """When a blocking motion counts as finished."""

    x: float | None = None
    y: float | None = None
    heading: float | None = None  # radians
    pos_tol: float = 0.02
    ang_tol: float = math.radians(3.0)

    def satisfied(self, robot: RobotSnapshot) -> bool:
        if self.x is not None:
            if math.hypot(robot.x - self.x, robot.y - self.y) > self.pos_tol:
                return False
        if self.heading is not None:
            if abs(wrap_angle(robot.theta - self.heading)) > self.ang_tol:
                return False
        return True


@dataclass
class Translated:
    """One API call, resolved against the current world."""

    skill: Skill
    completion: Completion | None = None  # None: returns as soon as accepted


class RobotSession:
    def __init__(self) -> None:
        self.robot_id: int | None = None
        self.snapshot: WorldSnapshot | None = None
        self.last_frame_wall: float | None = None

    # ------------------------------------------------------------------
    # state intake

    def update(self, snapshot: WorldSnapshot, wall_time: float) -> None:
        if self.snapshot is None or snapshot.seq >= self.snapshot.seq:
            self.snapshot = snapshot
            self.last_frame_wall = wall_time

    def fresh_snapshot(self, wall_now: float) -> WorldSnapshot:
        if self.snapshot is None or self.last_frame_wall is None:
            raise ApiError(
                "no world state received yet (is the simulator running?)"
            )
        if wall_now - self.last_frame_wall > STALE_AFTER:
            age = wall_now - self.last_frame_wall
            raise ApiError(
                f"world state is stale ({age:.1f} s old); connection lost?"
            )
        return self.snapshot

    def own_robot(self, wall_now: float) -> RobotSnapshot:
        if self.robot_id is None:
            raise ApiError("call robot.setRobotId(...) first.")
        snap = self.fresh_snapshot(wall_now)
        robot = snap.robots.get(self.robot_id)
        if robot is None:
            raise ApiError(f"robot {self.robot_id} is not in this scenario.")
        return robot

    # ------------------------------------------------------------------
    # senses

    def sense(self, name: str, wall_now: float) -> float:
        if name == "getPosX":
            return self.own_robot(wall_now).x
        if name == "getPosY":
            return self.own_robot(wall_now).y
        if name == "getAngle":
            return math.degrees(self.own_robot(wall_now).theta)
        snap = self.fresh_snapshot(wall_now)
        if name == "getBallPosX":
            return snap.ball_x
        if name == "getBallPosY":
            return snap.ball_y
        if name == "getBallVelX":
            return snap.ball_vx
        if name == "getBallVelY":
            return snap.ball_vy
        raise ApiError(f"unknown sense {name!r}.")

    # ------------------------------------------------------------------
    # commands

    def set_robot_id(self, value: object, wall_now: float) -> None:
        rid = _require_number("id", value)
        if rid != int(rid) or rid < 0:
            raise ApiError("robot id must be a whole number (0, 1, 2, ...).")
        snap = self.fresh_snapshot(wall_now)
        if int(rid) not in snap.robots:
            known = ", ".join(str(k) for k in sorted(snap.robots))
            raise ApiError(
                f"robot {int(rid)} is not in this scenario (robots: {known})."
            )
        self.robot_id = int(rid)

    def translate(self, name: str, args: tuple, wall_now: float) -> Translated:
        """Resolve one motion/skill call into a wire command + completion."""
        if self.robot_id is None:
            raise ApiError("call robot.setRobotId(...) first.")

        if name == "kick":
            power = _require_number("power", _arg(args, 0, name))
            return Translated(Kick(power))
        if name == "dribble":
            return Translated(Dribble(_truthy(_arg(args, 0, name))))
        if name == "catchBall":
            return Translated(CatchBall())
        if name == "block":
            return Translated(Block())

        me = self.own_robot(wall_now)

        if name == "moveForward":
            heading = _snap_to_axis(me.theta)
            col, row = grid.nearest_cell(me.x, me.y)
            col += round(math.cos(heading))
            row += round(math.sin(heading))
            tx, ty = grid.cell_center(*grid.clamp_cell(col, row))
            return _move(tx, ty, heading)
        if name in ("turnLeft", "turnRight"):
            delta = math.pi / 2 if name == "turnLeft" else -math.pi / 2
            heading = wrap_angle(me.theta + delta)
            return _turn(heading)
        if name in ("moveByXCells", "moveByYCells"):
            cells = _require_number("cells", _arg(args, 0, name))
            if cells != int(cells):
                raise ApiError("cells must be a whole number.")
            col, row = grid.nearest_cell(me.x, me.y)
            if name == "moveByXCells":
                col += int(cells)
            else:
                row += int(cells)
            tx, ty = grid.cell_center(*grid.clamp_cell(col, row))
            return _move(tx, ty, None)
        if name == "moveByX":
            dx = _require_number("dx", _arg(args, 0, name))
            return _move(me.x + dx, me.y, None)
        if name == "moveByY":
            dy = _require_number("dy", _arg(args, 0, name))
            return _move(me.x, me.y + dy, None)
        if name == "moveByXY":
            dx = _require_number("dx", _arg(args, 0, name))
            dy = _require_number("dy", _arg(args, 1, name))
            return _move(me.x + dx, me.y + dy, None)
        if name == "turnBy":
            deg = _require_number("degrees", _arg(args, 0, name))
            return _turn(wrap_angle(me.theta + math.radians(deg)))
        if name == "moveBy":
            dx = _require_number("dx", _arg(args, 0, name))
            dy = _require_number("dy", _arg(args, 1, name))
            deg = _require_number("degrees", _arg(args, 2, name))
            return _move(me.x + dx, me.y + dy, wrap_angle(me.theta + math.radians(deg)))
        if name == "moveToX":
            x = _require_number("x", _arg(args, 0, name))
            return _move(x, me.y, None)
        if name == "moveToY":
            y = _require_number("y", _arg(args, 0, name))
            return _move(me.x, y, None)
        if name == "moveToXY":
            x = _require_number("x", _arg(args, 0, name))
            y = _require_number("y", _arg(args, 1, name))
            return _move(x, y, None)
        if name == "turnTo":
            deg = _require_number("degrees", _arg(args, 0, name))
            return _turn(wrap_angle(math.radians(deg)))
        if name == "moveTo":
            x = _require_number("x", _arg(args, 0, name))
            y = _require_number("y", _arg(args, 1, name))
            deg = _require_number("degrees", _arg(args, 2, name))
            return _move(x, y, wrap_angle(math.radians(deg)))
        raise ApiError(f"unknown command {name!r}.")


def _move(x: float, y: float, heading: float | None) -> Translated:
    return Translated(
        MoveTo(x, y, heading), Completion(x=x, y=y, heading=heading)
    )


def _turn(heading: float) -> Translated:
    return Translated(TurnTo(heading), Completion(heading=heading))


def _snap_to_axis(theta: float) -> float:
    quarter = round(theta / (math.pi / 2))
    return wrap_angle(quarter * math.pi / 2)


def _arg(args: tuple, index: int, name: str):
    if index >= len(args):
        raise ApiError(
            f"missing argument {index + 1}.", category="op-type-mismatch"
        )
    return args[index]


def _require_number(label: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, float):
        raise ApiError(
            f"{label} must be a number.", category="op-type-mismatch"
        )
    if not math.isfinite(value):
        raise ApiError(
            f"{label} must be a finite number.", category="op-type-mismatch"
        )
    return value


def _truthy(value: object) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value != 0.0 and not math.isnan(value)
    if isinstance(value, str):
        return bool(value)
    return False
