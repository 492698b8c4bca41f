"""The command guard: every robot command and every setpoint passes here.

The guard sits between clients (programs, adversary scripts, anything on
the wire) and the simulator's actuators. It enforces six measures:

1.  Admission: commands with out-of-field targets are clamped into the
    reachable field before acceptance; kicks are only accepted when the
    ball is in range and inside the kick cone (otherwise the command is
    rejected with a reason).
2.  Speed clamp: every velocity setpoint is scaled, direction preserved,
    to the speed limit; turn rates are clamped the same way.
3.  Crash prevention: each tick, per robot in a fixed order, the desired
    velocity is replaced by the first safe candidate from a deterministic
    fallback list (scaled and rotated variants, then a full stop). A
    candidate is safe when, for every other robot and obstacle, current
    distance minus both worst-case travel-until-stopped bounds stays at or
    above the minimum center distance. Because the bound for "brake now"
    is exactly the braking distance u^2/(2a), the full stop is always
    safe, by induction: accepting only safe candidates preserves
    "distance >= minimum + both braking distances" from tick to tick.
4.  Watchdog: a robot with no accepted command for `command_timeout`
    seconds is halted.
5.  Hard halt: a halted robot (explicit HALT or watchdog) brakes to zero
    within one control period and stays stopped until its next command.
6.  Field walls are enforced by the physics itself; the guard additionally
    refuses to aim a robot beyond them (measure 1), so wall contact only
    happens by drift, never by intent.

The control loop also lives here: the guard owns the translation from an
accepted command (a target pose, a turn, a ball behavior) into velocity
setpoints, so nothing reaches the actuators around the checks.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from ..sim.world import (
    Actuation,
    BALL_RADIUS,
    RobotState,
    WorldState,
    wrap_angle,
)
from .commands import (
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
)
from .config import SafetyConfig


@dataclass
class _Slot:
    active: Skill | None = None
    dribble: bool = False
    pending_kick: float | None = None
    last_command_time: float = float("-inf")
    halted: bool = True
    halt_reason: str | None = None


@dataclass
class GuardEvent:
    time: float
    robot_id: int
    kind: str  # "halt", "clamp", "fallback"
    detail: str


# Candidate transforms tried by crash prevention, in order: the proposal
# itself, three scaled-down versions, rotations away from the original
# direction at full and half speed, then a full stop (always safe).
_CANDIDATE_ROTS = (
    math.radians(30.0),
    math.radians(-30.0),
    math.radians(60.0),
    math.radians(-60.0),
    math.radians(90.0),
    math.radians(-90.0),
)


class CommandGuard:
    def __init__(self, config: SafetyConfig | None = None):
        self.config = config or SafetyConfig()
        self.slots: dict[int, _Slot] = {}
        self.events: deque[GuardEvent] = deque(maxlen=1000)

    def _slot(self, robot_id: int) -> _Slot:
        slot = self.slots.get(robot_id)
        if slot is None:
            slot = _Slot()
            self.slots[robot_id] = slot
        return slot

    # ------------------------------------------------------------------
    # admission

    def admit(
        self, command: Command, world: WorldState
    ) -> tuple[Skill | None, Rejection | None]:
        """Accept (possibly clamping) or reject one command.

        Returns (normalized_skill, None) on acceptance and
        (None, rejection) otherwise. Acceptance updates the robot's slot.
        """
        cfg = self.config
        robot = world.robot(command.robot_id)
        if robot is None:
            return None, Rejection(
                "unknown-robot", f"no robot with id {command.robot_id}."
            )
        slot = self._slot(command.robot_id)
        skill = command.skill

        if isinstance(skill, MoveTo):
            if not all(math.isfinite(v) for v in (skill.x, skill.y)):
                return None, Rejection("bad-target", "target must be finite.")
            cx = _clamp(skill.x, -cfg.inset_x, cfg.inset_x)
            cy = _clamp(skill.y, -cfg.inset_y, cfg.inset_y)
            heading = skill.heading
            if heading is not None:
                if not math.isfinite(heading):
                    return None, Rejection("bad-target", "heading must be finite.")
                heading = wrap_angle(heading)
            if (cx, cy) != (skill.x, skill.y):
                self.events.append(
                    GuardEvent(
                        world.time,
                        command.robot_id,
                        "clamp",
                        f"target ({skill.x:.3f}, {skill.y:.3f}) "
                        f"clamped to ({cx:.3f}, {cy:.3f})",
                    )
                )
            skill = MoveTo(cx, cy, heading)
            slot.active = skill
            slot.halted = False
            slot.halt_reason = None
        elif isinstance(skill, TurnTo):
            if not math.isfinite(skill.heading):
                return None, Rejection("bad-target", "heading must be finite.")
            skill = TurnTo(wrap_angle(skill.heading))
            slot.active = skill
            slot.halted = False
            slot.halt_reason = None
        elif isinstance(skill, Kick):
            if not math.isfinite(skill.power):
                return None, Rejection("bad-target", "kick power must be finite.")
            power = _clamp(skill.power, 0.0, 1.0)
            rejection = self._kick_rejection(robot, world)
            if rejection is not None:
                return None, rejection
            skill = Kick(power)
            slot.pending_kick = power
        elif isinstance(skill, Dribble):
            slot.dribble = skill.on
        elif isinstance(skill, (CatchBall, Block)):
            slot.active = skill
            slot.halted = False
            slot.halt_reason = None
        elif isinstance(skill, Halt):
            slot.active = None
            slot.dribble = False
            slot.pending_kick = None
            slot.halted = True
            slot.halt_reason = "commanded"
        else:
            return None, Rejection("unknown-skill", f"unknown skill {skill!r}.")

        slot.last_command_time = world.time
        return skill, None

    def _kick_rejection(
        self, robot: RobotState, world: WorldState
    ) -> Rejection | None:
        cfg = self.config
        ball = world.ball
        dx, dy = ball.x - robot.x, ball.y - robot.y
        dist = math.hypot(dx, dy)
        if dist > cfg.kick_max_dist:
            return Rejection(
                "kick-out-of-range",
                f"ball is {dist:.2f} m away; kicks reach {cfg.kick_max_dist:.2f} m.",
            )
        bearing_err = abs(wrap_angle(math.atan2(dy, dx) - robot.theta))
        if bearing_err > cfg.kick_cone:
            return Rejection(
                "kick-outside-cone",
                f"ball is {math.degrees(bearing_err):.0f} deg off the kicker; "
                f"the kick cone is {cfg.kick_cone_deg:.0f} deg.",
            )
        return None

    def halt_all(self, world: WorldState) -> None:
        for robot in world.robots:
            slot = self._slot(robot.robot_id)
            slot.active = None
            slot.dribble = False
            slot.pending_kick = None
            slot.halted = True
            slot.halt_reason = "commanded"
            slot.last_command_time = world.time

    # ------------------------------------------------------------------
    # per-tick control

    def tick(self, world: WorldState) -> dict[int, Actuation]:
        """Produce one actuation per robot for the next physics step."""
        cfg = self.config
        acts: dict[int, Actuation] = {}
        order = sorted(world.robots, key=lambda r: r.robot_id)

        for robot in order:
            slot = self._slot(robot.robot_id)
            if (
                not slot.halted
                and world.time - slot.last_command_time > cfg.command_timeout
            ):
                slot.halted = True
                slot.halt_reason = "timeout"
                slot.active = None
                slot.dribble = False
                self.events.append(
                    GuardEvent(
                        world.time,
                        robot.robot_id,
                        "halt",
                        f"no command for {cfg.command_timeout:.1f} s",
                    )
                )
            act = Actuation(dribble=slot.dribble)
            if slot.halted:
                act.hard_stop = True
            else:
                vx, vy, omega = self._desired_velocity(slot, robot, world)
                vx, vy = self.clamp_velocity(vx, vy)
                act.vx, act.vy = vx, vy
                act.omega = _clamp(omega, -cfg.max_omega, cfg.max_omega)
            if slot.pending_kick is not None:
                act.kick_power = slot.pending_kick
                slot.pending_kick = None
            acts[robot.robot_id] = act

        self._crash_prevention(world, order, acts)
        return acts

    def clamp_velocity(self, vx: float, vy: float) -> tuple[float, float]:
        limit = self.config.max_speed
        speed = math.hypot(vx, vy)
        if speed <= limit or speed == 0.0:
            return vx, vy
        scale = limit / speed
        return vx * scale, vy * scale

    # ------------------------------------------------------------------
    # command -> velocity

    def _desired_velocity(
        self, slot: _Slot, robot: RobotState, world: WorldState
    ) -> tuple[float, float, float]:
        cfg = self.config
        active = slot.active
        if active is None:
            return 0.0, 0.0, 0.0
        if isinstance(active, MoveTo):
            vx, vy = self._drive_toward(robot, active.x, active.y, 0.0)
            omega = (
                self._turn_toward(robot, active.heading)
                if active.heading is not None
                else 0.0
            )
            return vx, vy, omega
        if isinstance(active, TurnTo):
            return 0.0, 0.0, self._turn_toward(robot, active.heading)
        if isinstance(active, CatchBall):
            ball = world.ball
            contact = cfg.robot_radius + BALL_RADIUS
            vx, vy = self._drive_toward(robot, ball.x, ball.y, contact)
            bearing = math.atan2(ball.y - robot.y, ball.x - robot.x)
            return vx, vy, self._turn_toward(robot, bearing)
        if isinstance(active, Block):
            ball = world.ball
            bearing = math.atan2(ball.y - robot.y, ball.x - robot.x)
            return 0.0, 0.0, self._turn_toward(robot, bearing)
        return 0.0, 0.0, 0.0

    def _drive_toward(
        self, robot: RobotState, tx: float, ty: float, stop_short: float
    ) -> tuple[float, float]:
        cfg = self.config
        dx, dy = tx - robot.x, ty - robot.y
        dist = math.hypot(dx, dy) - stop_short
        if dist <= cfg.arrive_dist:
            return 0.0, 0.0
        brake = math.sqrt(2.0 * cfg.accel_headroom * cfg.max_accel * dist)
        speed = min(cfg.kp_pos * dist, brake, cfg.max_speed)
        full = math.hypot(dx, dy)
        return dx / full * speed, dy / full * speed

    def _turn_toward(self, robot: RobotState, heading: float) -> float:
        cfg = self.config
        err = wrap_angle(heading - robot.theta)
        if abs(err) < math.radians(cfg.arrive_deg):
            return 0.0
        return _clamp(cfg.kp_ang * err, -cfg.max_omega, cfg.max_omega)

    # ------------------------------------------------------------------
    # crash prevention

    def _crash_prevention(
        self,
        world: WorldState,
        order: list[RobotState],
        acts: dict[int, Actuation],
    ) -> None:
        cfg = self.config
        if len(order) < 2 and not world.obstacles:
            return
        a2 = 2.0 * cfg.max_accel
        dt = cfg.period
        dmin = cfg.min_center_distance
        # Worst-case further travel if every later tick commands a stop:
        # cmd 0 brakes through the whole step, so the bound is exactly the
        # braking distance; a nonzero command may hold peak speed for one
        # step before braking.
        decided: dict[int, float] = {}  # robot_id -> reach of decided command
        speeds = {r.robot_id: math.hypot(r.vx, r.vy) for r in order}

        def reach(u: float, cmd: float) -> float:
            if cmd == 0.0:
                return u * u / a2
            s = u if u > cmd else cmd
            return s * dt + s * s / a2

        for robot in order:
            act = acts[robot.robot_id]
            u = speeds[robot.robot_id]
            if act.hard_stop:
                decided[robot.robot_id] = reach(u, 0.0)
                continue
            vx, vy = act.vx, act.vy
            chosen: tuple[float, float] | None = None
            for cx, cy in self._candidates(vx, vy):
                cmd_speed = math.hypot(cx, cy)
                r_i = reach(u, cmd_speed)
                safe = True
                for other in order:
                    if other.robot_id == robot.robot_id:
                        continue
                    r_j = decided.get(other.robot_id)
                    if r_j is None:
                        r_j = reach(speeds[other.robot_id], 0.0)
                    gap = (
                        math.hypot(other.x - robot.x, other.y - robot.y)
                        - r_i
                        - r_j
                    )
                    if gap < dmin:
                        safe = False
                        break
                if safe:
                    for obs in world.obstacles:
                        gap = (
                            math.hypot(obs.x - robot.x, obs.y - robot.y)
                            - r_i
                            - (cfg.robot_radius + obs.radius + cfg.separation_margin)
                        )
                        if gap < 0.0:
                            safe = False
                            break
                if safe:
                    chosen = (cx, cy)
                    break
            if chosen is None:
                # The stop candidate is always safe under the inductive
                # invariant; reaching here means a scenario started robots
                # closer than the minimum. Brake hard.
                act.vx = act.vy = 0.0
                act.hard_stop = True
                decided[robot.robot_id] = reach(u, 0.0)
                self.events.append(
                    GuardEvent(
                        world.time,
                        robot.robot_id,
                        "fallback",
                        "no safe candidate; braking",
                    )
                )
                continue
            if chosen != (vx, vy):
                self.events.append(
                    GuardEvent(
                        world.time,
                        robot.robot_id,
                        "fallback",
                        f"setpoint ({vx:.2f}, {vy:.2f}) "
                        f"replaced by ({chosen[0]:.2f}, {chosen[1]:.2f})",
                    )
                )
            act.vx, act.vy = chosen
            decided[robot.robot_id] = reach(u, math.hypot(*chosen))

    def _candidates(self, vx: float, vy: float):
        yield vx, vy
        if vx != 0.0 or vy != 0.0:
            for scale in (0.75, 0.5, 0.25):
                yield vx * scale, vy * scale
            rotated = []
            for rot in _CANDIDATE_ROTS:
                c, s = math.cos(rot), math.sin(rot)
                rotated.append((vx * c - vy * s, vx * s + vy * c))
            for rx, ry in rotated:
                yield rx, ry
                yield rx * 0.5, ry * 0.5
            # creep options so close-quarters robots can still maneuver
            yield vx * 0.1, vy * 0.1
            for rx, ry in rotated:
                yield rx * 0.2, ry * 0.2
        yield 0.0, 0.0


def _clamp(value: float, lo: float, hi: float) -> float:
    if value < lo:
        return lo
    if value > hi:
        return hi
    return value
