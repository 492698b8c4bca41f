"""Robot command vocabulary.

These are the only operations a client can request. Every command is
addressed to one robot and passes through the guard before anything
actuates. The wire mapping keeps one field per parameter so a command is
a single readable datagram line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..wire.envelope import Message, WireError

MOVE_TO = "MOVE_TO"
TURN_TO = "TURN_TO"
KICK = "KICK"
DRIBBLE = "DRIBBLE"
CATCH = "CATCH"
BLOCK = "BLOCK"
HALT = "HALT"

SKILLS = (MOVE_TO, TURN_TO, KICK, DRIBBLE, CATCH, BLOCK, HALT)


@dataclass(frozen=True)
class MoveTo:
    x: float
    y: float
    heading: float | None = None  # radians; None keeps the current heading
    skill = MOVE_TO


@dataclass(frozen=True)
class TurnTo:
    heading: float  # radians
    skill = TURN_TO


@dataclass(frozen=True)
class Kick:
    power: float  # 0..1
    skill = KICK


@dataclass(frozen=True)
class Dribble:
    on: bool
    skill = DRIBBLE


@dataclass(frozen=True)
class CatchBall:
    skill = CATCH


@dataclass(frozen=True)
class Block:
    skill = BLOCK


@dataclass(frozen=True)
class Halt:
    skill = HALT


Skill = Union[MoveTo, TurnTo, Kick, Dribble, CatchBall, Block, Halt]


@dataclass(frozen=True)
class Command:
    robot_id: int
    skill: Skill


@dataclass(frozen=True)
class Rejection:
    """Why the guard refused a command."""

    reason: str  # short machine-readable code
    detail: str  # human-readable sentence


def skill_to_fields(skill: Skill, message: Message) -> None:
    message.put("skill", skill.skill)
    if isinstance(skill, MoveTo):
        message.put("x", skill.x).put("y", skill.y)
        if skill.heading is not None:
            message.put("heading", skill.heading)
    elif isinstance(skill, TurnTo):
        message.put("heading", skill.heading)
    elif isinstance(skill, Kick):
        message.put("power", skill.power)
    elif isinstance(skill, Dribble):
        message.put("on", skill.on)


def skill_from_message(message: Message) -> Skill:
    name = message.require("skill")
    if name == MOVE_TO:
        heading = message.get("heading")
        return MoveTo(
            message.get_float("x"),
            message.get_float("y"),
            float(heading) if heading is not None else None,
        )
    if name == TURN_TO:
        return TurnTo(message.get_float("heading"))
    if name == KICK:
        return Kick(message.get_float("power"))
    if name == DRIBBLE:
        raw = message.require("on")
        if raw not in ("true", "false"):
            raise WireError(f"dribble on={raw!r} must be true or false")
        return Dribble(raw == "true")
    if name == CATCH:
        return CatchBall()
    if name == BLOCK:
        return Block()
    if name == HALT:
        return Halt()
    raise WireError(f"unknown skill {name!r}")
