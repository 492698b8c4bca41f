"""Fixed-timestep 2D physics for omnidirectional robots and one ball.

The update order each step is: robots integrate their accel-limited
velocities, walls and obstacles clamp them, kicks fire, the dribbler
pins or releases the ball, and finally the ball integrates with rolling
friction and wall bounces. One step advances time by exactly the control
period; determinism is bit-exact given the same actuation sequence.

Two modeling choices matter to the safety analysis elsewhere:

- Velocity tracking moves the current velocity toward the setpoint by at
  most `max_accel * dt`, so a robot's speed during a step never exceeds
  the larger of its current speed and its commanded speed.
- A hard stop (halt) zeroes the velocity within the step, which is never
  farther-reaching than the braking the guard plans for.

Robots do not collide with each other here: keeping them apart is the
guard's job, and the fuzz suite holds the guard to it with nothing to
mask a failure.
"""

from __future__ import annotations

import math

from ..guard.config import SafetyConfig
from .world import (
    Actuation,
    BALL_RADIUS,
    RobotState,
    WorldState,
    wrap_angle,
)

BALL_FRICTION = 0.5  # m/s^2 rolling deceleration
WALL_RESTITUTION = 0.7  # ball speed kept after a wall bounce
ROBOT_RESTITUTION = 0.5  # ball speed kept after bouncing off a robot shell
DRIBBLE_RANGE = 0.12  # m from robot center within which the dribbler grabs
DRIBBLE_CONE = math.radians(50.0)  # dribbler works only roughly in front


class Simulator:
    def __init__(self, world: WorldState, config: SafetyConfig | None = None):
        self.world = world
        self.config = config or SafetyConfig()
        self._pinned_by: int | None = None  # robot id holding the ball

    # ------------------------------------------------------------------

    def step(self, acts: dict[int, Actuation] | None = None) -> None:
        cfg = self.config
        dt = cfg.period
        world = self.world
        acts = acts or {}

        kicks: list[tuple[RobotState, float]] = []
        for robot in world.robots:
            act = acts.get(robot.robot_id)
            if act is None:
                act = Actuation(hard_stop=True)
            self._integrate_robot(robot, act, dt)
            robot.dribbling = act.dribble
            if act.kick_power is not None:
                kicks.append((robot, act.kick_power))

        for robot, power in kicks:
            self._kick(robot, power)

        # A kicker's own dribbler must not re-capture the ball in the same
        # step the kick launches it (the pinned ball sits inside grab range).
        self._update_dribble(skip={robot.robot_id for robot, _ in kicks})
        if self._pinned_by is None:
            self._integrate_ball(dt)

        world.time += dt

    # ------------------------------------------------------------------
    # robots

    def _integrate_robot(self, robot: RobotState, act: Actuation, dt: float) -> None:
        cfg = self.config
        if act.hard_stop:
            robot.vx = robot.vy = robot.omega = 0.0
        else:
            dvx = act.vx - robot.vx
            dvy = act.vy - robot.vy
            dv = math.hypot(dvx, dvy)
            max_dv = cfg.max_accel * dt
            if dv > max_dv:
                scale = max_dv / dv
                robot.vx += dvx * scale
                robot.vy += dvy * scale
            else:
                robot.vx = act.vx
                robot.vy = act.vy
            robot.omega = act.omega

        robot.x += robot.vx * dt
        robot.y += robot.vy * dt
        robot.theta = wrap_angle(robot.theta + robot.omega * dt)

        # walls are hard: clamp position, kill the velocity into the wall
        if robot.x < -cfg.inset_x:
            robot.x = -cfg.inset_x
            robot.vx = max(robot.vx, 0.0)
        elif robot.x > cfg.inset_x:
            robot.x = cfg.inset_x
            robot.vx = min(robot.vx, 0.0)
        if robot.y < -cfg.inset_y:
            robot.y = -cfg.inset_y
            robot.vy = max(robot.vy, 0.0)
        elif robot.y > cfg.inset_y:
            robot.y = cfg.inset_y
            robot.vy = min(robot.vy, 0.0)

        # static obstacles are hard too: push out, kill the inward component
        for obs in self.world.obstacles:
            min_dist = cfg.robot_radius + obs.radius
            dx, dy = robot.x - obs.x, robot.y - obs.y
            dist = math.hypot(dx, dy)
            if dist >= min_dist or dist == 0.0:
                continue
            nx, ny = dx / dist, dy / dist
            robot.x = obs.x + nx * min_dist
            robot.y = obs.y + ny * min_dist
            inward = robot.vx * nx + robot.vy * ny
            if inward < 0.0:
                robot.vx -= inward * nx
                robot.vy -= inward * ny

    # ------------------------------------------------------------------
    # ball

    def _kick(self, robot: RobotState, power: float) -> None:
        ball = self.world.ball
        speed = power * self.config.kick_speed_per_power
        ball.vx = math.cos(robot.theta) * speed
        ball.vy = math.sin(robot.theta) * speed
        if self._pinned_by == robot.robot_id:
            self._pinned_by = None

    def _update_dribble(self, skip: set[int] | None = None) -> None:
        cfg = self.config
        ball = self.world.ball
        holder: RobotState | None = None
        if self._pinned_by is not None:
            robot = self.world.robot(self._pinned_by)
            if robot is not None and robot.dribbling:
                holder = robot
            else:
                self._pinned_by = None
        if holder is None:
            for robot in self.world.robots:
                if skip and robot.robot_id in skip:
                    continue
                if not robot.dribbling:
                    continue
                dx, dy = ball.x - robot.x, ball.y - robot.y
                dist = math.hypot(dx, dy)
                if dist > DRIBBLE_RANGE:
                    continue
                if abs(wrap_angle(math.atan2(dy, dx) - robot.theta)) > DRIBBLE_CONE:
                    continue
                holder = robot
                self._pinned_by = robot.robot_id
                break
        if holder is not None:
            face = cfg.robot_radius + BALL_RADIUS
            ball.x = holder.x + math.cos(holder.theta) * face
            ball.y = holder.y + math.sin(holder.theta) * face
            ball.vx = holder.vx
            ball.vy = holder.vy

    def _integrate_ball(self, dt: float) -> None:
        cfg = self.config
        ball = self.world.ball
        speed = math.hypot(ball.vx, ball.vy)
        if speed > 0.0:
            drop = BALL_FRICTION * dt
            if drop >= speed:
                ball.vx = ball.vy = 0.0
            else:
                scale = (speed - drop) / speed
                ball.vx *= scale
                ball.vy *= scale
        ball.x += ball.vx * dt
        ball.y += ball.vy * dt

        limit_x = cfg.field_half_x - BALL_RADIUS
        limit_y = cfg.field_half_y - BALL_RADIUS
        if ball.x < -limit_x:
            ball.x = -limit_x
            ball.vx = -ball.vx * WALL_RESTITUTION
        elif ball.x > limit_x:
            ball.x = limit_x
            ball.vx = -ball.vx * WALL_RESTITUTION
        if ball.y < -limit_y:
            ball.y = -limit_y
            ball.vy = -ball.vy * WALL_RESTITUTION
        elif ball.y > limit_y:
            ball.y = limit_y
            ball.vy = -ball.vy * WALL_RESTITUTION

        # bounce off robot shells
        for robot in self.world.robots:
            min_dist = cfg.robot_radius + BALL_RADIUS
            dx, dy = ball.x - robot.x, ball.y - robot.y
            dist = math.hypot(dx, dy)
            if dist >= min_dist or dist == 0.0:
                continue
            nx, ny = dx / dist, dy / dist
            ball.x = robot.x + nx * min_dist
            ball.y = robot.y + ny * min_dist
            rel = (ball.vx - robot.vx) * nx + (ball.vy - robot.vy) * ny
            if rel < 0.0:
                ball.vx -= (1.0 + ROBOT_RESTITUTION) * rel * nx
                ball.vy -= (1.0 + ROBOT_RESTITUTION) * rel * ny

        # obstacles reflect the ball like walls
        for obs in self.world.obstacles:
            min_dist = obs.radius + BALL_RADIUS
            dx, dy = ball.x - obs.x, ball.y - obs.y
            dist = math.hypot(dx, dy)
            if dist >= min_dist or dist == 0.0:
                continue
            nx, ny = dx / dist, dy / dist
            ball.x = obs.x + nx * min_dist
            ball.y = obs.y + ny * min_dist
            inward = ball.vx * nx + ball.vy * ny
            if inward < 0.0:
                ball.vx -= (1.0 + WALL_RESTITUTION) * inward * nx
                ball.vy -= (1.0 + WALL_RESTITUTION) * inward * ny
