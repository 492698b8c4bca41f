"""Safety middleware: command vocabulary, limits config, and the guard."""

from .commands import (
    SKILLS,
    Block,
    CatchBall,
    Command,
    Dribble,
    Halt,
    Kick,
    MoveTo,
    Rejection,
    Skill,
    TurnTo,
    skill_from_message,
    skill_to_fields,
)
from .config import SafetyConfig, config_from_dict, load_config
from .guard import CommandGuard, GuardEvent

__all__ = [
    "Block",
    "CatchBall",
    "Command",
    "CommandGuard",
    "Dribble",
    "GuardEvent",
    "Halt",
    "Kick",
    "MoveTo",
    "Rejection",
    "SKILLS",
    "SafetyConfig",
    "Skill",
    "TurnTo",
    "config_from_dict",
    "load_config",
    "skill_from_message",
    "skill_to_fields",
]
