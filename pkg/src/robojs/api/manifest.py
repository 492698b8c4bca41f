"""Catalog of the builtin robot and console calls.

This is the single source of truth for names, argument counts, and call
kinds. The static checker reads arities from it, the interpreter resolves
members against it, and the IDE fetches it (as JSON) for completion.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ApiEntry:
    namespace: str
    name: str
    params: tuple[str, ...]
    layer: str  # setup | beginner | intermediate | advanced | skill | sense | utility
    kind: str  # setup | motion | skill | sense | print
    result: str  # "number" | "none"
    blocking: bool
    variadic: bool = False

    @property
    def arity(self) -> int | None:
        return None if self.variadic else len(self.params)

    @property
    def full_name(self) -> str:
        return f"{self.namespace}.{self.name}"


def _robot(name: str, params: tuple[str, ...], layer: str, kind: str,
           result: str = "none", blocking: bool = True) -> ApiEntry:
    return ApiEntry("robot", name, params, layer, kind, result, blocking)


API_ENTRIES: tuple[ApiEntry, ...] = (
    _robot("setRobotId", ("id",), "setup", "setup", blocking=False),
    # Beginner: one grid cell at a time, quarter turns.
    _robot("moveForward", (), "beginner", "motion"),
    _robot("turnLeft", (), "beginner", "motion"),
    _robot("turnRight", (), "beginner", "motion"),
    # Intermediate: several cells along a grid axis.
    _robot("moveByXCells", ("cells",), "intermediate", "motion"),
    _robot("moveByYCells", ("cells",), "intermediate", "motion"),
    # Advanced: metric displacements and absolute targets.
    _robot("moveByX", ("dx",), "advanced", "motion"),
    _robot("moveByY", ("dy",), "advanced", "motion"),
    _robot("moveByXY", ("dx", "dy"), "advanced", "motion"),
    _robot("turnBy", ("degrees",), "advanced", "motion"),
    _robot("moveBy", ("dx", "dy", "degrees"), "advanced", "motion"),
    _robot("moveToX", ("x",), "advanced", "motion"),
    _robot("moveToY", ("y",), "advanced", "motion"),
    _robot("moveToXY", ("x", "y"), "advanced", "motion"),
    _robot("turnTo", ("degrees",), "advanced", "motion"),
    _robot("moveTo", ("x", "y", "degrees"), "advanced", "motion"),
    # Ball skills.
    _robot("kick", ("power",), "skill", "skill"),
    _robot("dribble", ("on",), "skill", "skill"),
    _robot("catchBall", (), "skill", "skill"),
    _robot("block", (), "skill", "skill"),
    # Senses: non-blocking reads of the latest world state.
    _robot("getPosX", (), "sense", "sense", result="number", blocking=False),
    _robot("getPosY", (), "sense", "sense", result="number", blocking=False),
    _robot("getAngle", (), "sense", "sense", result="number", blocking=False),
    _robot("getBallPosX", (), "sense", "sense", result="number", blocking=False),
    _robot("getBallPosY", (), "sense", "sense", result="number", blocking=False),
    _robot("getBallVelX", (), "sense", "sense", result="number", blocking=False),
    _robot("getBallVelY", (), "sense", "sense", result="number", blocking=False),
    ApiEntry("console", "log", ("values",), "utility", "print", "none",
             blocking=False, variadic=True),
)

_BY_FULL_NAME = {entry.full_name: entry for entry in API_ENTRIES}
_BY_NAMESPACE: dict[str, dict[str, ApiEntry]] = {}
for _entry in API_ENTRIES:
    _BY_NAMESPACE.setdefault(_entry.namespace, {})[_entry.name] = _entry


def api_catalog() -> tuple[ApiEntry, ...]:
    return API_ENTRIES


def lookup(namespace: str, name: str) -> ApiEntry | None:
    return _BY_NAMESPACE.get(namespace, {}).get(name)


def namespace_members(namespace: str) -> dict[str, ApiEntry]:
    return dict(_BY_NAMESPACE.get(namespace, {}))


def manifest_json() -> str:
    doc = {
        "language": "robojs",
        "namespaces": sorted(_BY_NAMESPACE),
        "entries": [asdict(entry) for entry in API_ENTRIES],
    }
    return json.dumps(doc, indent=2)
