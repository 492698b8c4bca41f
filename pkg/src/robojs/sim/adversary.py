"""Scripted opponents.

Adversaries are ordinary command sources: each policy looks at the world
and submits commands through the same guard as programs on the wire, so
an adversary can no more speed, collide, or leave the field than anyone
else. Policies re-issue commands a few times a second, which also keeps
them ahead of the command watchdog.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..guard.commands import Command, Kick, MoveTo
from ..guard.guard import CommandGuard
from .scenarios import AdversarySpec
from .world import WorldState, wrap_angle

REISSUE_INTERVAL = 0.25  # s between commands per adversary


@dataclass
class _PolicyState:
    spec: AdversarySpec
    next_time: float = 0.0


class AdversaryDriver:
    def __init__(self, specs: tuple[AdversarySpec, ...]):
        self.policies = [_PolicyState(spec) for spec in specs]

    def tick(self, world: WorldState, guard: CommandGuard) -> None:
        for state in self.policies:
            if world.time < state.next_time:
                continue
            state.next_time = world.time + REISSUE_INTERVAL
            skill = self._decide(state.spec, world)
            if skill is not None:
                guard.admit(Command(state.spec.robot_id, skill), world)

    def _decide(self, spec: AdversarySpec, world: WorldState):
        me = world.robot(spec.robot_id)
        if me is None:
            return None
        ball = world.ball
        if spec.policy == "chase":
            target = world.robot(int(spec.params.get("target", 0)))
            if target is None:
                return None
            return MoveTo(target.x, target.y)
        if spec.policy == "goalkeeper":
            goal_x = float(spec.params.get("goal_x", 1.65))
            span = float(spec.params.get("goal_half_width", 0.45))
            y = max(-span, min(span, ball.y))
            heading = math.atan2(ball.y - me.y, ball.x - me.x)
            return MoveTo(goal_x, y, heading)
        if spec.policy == "striker":
            goal_x = float(spec.params.get("goal_x", -1.65))
            dx, dy = ball.x - me.x, ball.y - me.y
            dist = math.hypot(dx, dy)
            bearing = math.atan2(dy, dx)
            if dist < 0.22 and abs(wrap_angle(bearing - me.theta)) < math.radians(25):
                return Kick(0.8)
            # approach from the side away from the goal it attacks
            behind = 0.15 if goal_x < 0 else -0.15
            return MoveTo(ball.x + behind, ball.y, bearing)
        return None
