"""Simulator physics: kicks, dribbling, friction, walls, determinism."""

import math

import pytest

from robojs.guard import Command, CommandGuard, Dribble, Kick, MoveTo, SafetyConfig
from robojs.sim import (
    BALL_FRICTION,
    BALL_RADIUS,
    DRIBBLE_RANGE,
    WALL_RESTITUTION,
    Actuation,
    BallState,
    Obstacle,
    RobotState,
    Simulator,
    WorldState,
    wrap_angle,
)

CFG = SafetyConfig()
DT = CFG.period


def make_sim(*robots: RobotState, ball: BallState | None = None):
    w = WorldState(robots=list(robots), ball=ball or BallState())
    return Simulator(w, SafetyConfig()), w


class TestKick:
    def test_kick_sets_ball_speed_proportional_to_power(self):
        sim, w = make_sim(
            RobotState(0, x=-0.15, y=0.0, theta=0.0), ball=BallState(0.0, 0.0)
        )
        guard = CommandGuard(sim.config)
        skill, rejection = guard.admit(Command(0, Kick(0.5)), w)
        assert rejection is None
        sim.step(guard.tick(w))
        # Impulse lands, then friction decays it for the one step already
        # integrated: allow that single-tick drop.
        expected = 0.5 * sim.config.kick_speed_per_power
        assert w.ball.speed == pytest.approx(expected, abs=BALL_FRICTION * DT + 1e-9)
        # Straight along the kicker's heading.
        assert w.ball.vy == pytest.approx(0.0, abs=1e-12)
        assert w.ball.vx > 0.0

    def test_kick_direction_follows_heading(self):
        theta = math.radians(40.0)
        sim, w = make_sim(
            RobotState(0, x=-0.15 * math.cos(theta), y=-0.15 * math.sin(theta), theta=theta),
            ball=BallState(0.0, 0.0),
        )
        guard = CommandGuard(sim.config)
        _, rejection = guard.admit(Command(0, Kick(1.0)), w)
        assert rejection is None
        sim.step(guard.tick(w))
        assert math.atan2(w.ball.vy, w.ball.vx) == pytest.approx(theta, abs=1e-9)

    def test_kick_while_dribbling_releases_the_ball(self):
        sim, w = make_sim(
            RobotState(0, x=0.0, y=0.0, theta=0.0),
            ball=BallState(0.1, 0.0),
        )
        guard = CommandGuard(sim.config)
        guard.admit(Command(0, Dribble(True)), w)
        sim.step(guard.tick(w))
        face = sim.config.robot_radius + BALL_RADIUS
        assert w.ball.x == pytest.approx(face)  # pinned at the face

        guard.admit(Command(0, Kick(1.0)), w)
        sim.step(guard.tick(w))
        # The ball leaves: farther than the dribbler can re-grab.
        assert math.hypot(w.ball.x, w.ball.y) > DRIBBLE_RANGE
        for _ in range(30):
            sim.step(guard.tick(w))
        assert math.hypot(w.ball.x - w.robots[0].x, w.ball.y) > 0.3


class TestDribble:
    def test_ball_pins_to_the_face(self):
        sim, w = make_sim(
            RobotState(0, theta=0.0), ball=BallState(0.1, 0.01)
        )
        sim.step({0: Actuation(dribble=True)})
        face = sim.config.robot_radius + BALL_RADIUS
        assert (w.ball.x, w.ball.y) == pytest.approx((face, 0.0))

    def test_ball_out_of_range_not_grabbed(self):
        sim, w = make_sim(
            RobotState(0, theta=0.0), ball=BallState(DRIBBLE_RANGE + 0.01, 0.0)
        )
        sim.step({0: Actuation(dribble=True)})
        assert w.ball.x > DRIBBLE_RANGE  # untouched, modulo friction (v=0)

    def test_ball_behind_robot_not_grabbed(self):
        # In grab range but 180 degrees off the dribbler face (and just
        # outside the robot shell, so contact physics stays out of it).
        sim, w = make_sim(
            RobotState(0, theta=0.0), ball=BallState(-0.115, 0.0)
        )
        sim.step({0: Actuation(dribble=True)})
        assert w.ball.x == pytest.approx(-0.115)

    def test_dribble_off_releases(self):
        sim, w = make_sim(RobotState(0, theta=0.0), ball=BallState(0.1, 0.0))
        sim.step({0: Actuation(dribble=True)})
        sim.step({0: Actuation(dribble=False)})
        # No longer pinned: ball integrates freely (here: stays put).
        face = sim.config.robot_radius + BALL_RADIUS
        assert w.ball.x == pytest.approx(face)
        assert not w.robots[0].dribbling


class TestBallPhysics:
    def test_friction_decays_speed_linearly(self):
        sim, w = make_sim(ball=BallState(0.0, 0.0, vx=1.0, vy=0.0))
        for _ in range(60):  # 1 s
            sim.step()
        assert w.ball.speed == pytest.approx(1.0 - BALL_FRICTION, abs=1e-9)

    def test_ball_rolls_to_a_stop(self):
        sim, w = make_sim(ball=BallState(0.0, 0.0, vx=0.3, vy=0.0))
        for _ in range(120):
            sim.step()
        assert w.ball.speed == 0.0

    def test_wall_bounce_restitution(self):
        cfg = SafetyConfig()
        start_x = cfg.field_half_x - BALL_RADIUS - 0.05
        sim, w = make_sim(ball=BallState(start_x, 0.0, vx=1.0, vy=0.0))
        speed_before = None
        for _ in range(30):
            if w.ball.vx > 0:
                speed_before = w.ball.vx
            sim.step()
            if w.ball.vx < 0:
                break
        assert w.ball.vx < 0, "ball should have bounced"
        assert abs(w.ball.vx) <= speed_before * WALL_RESTITUTION + 1e-9
        assert w.ball.x <= cfg.field_half_x - BALL_RADIUS + 1e-12

    def test_ball_bounces_off_obstacles(self):
        sim, w = make_sim(ball=BallState(0.0, 0.0, vx=1.0, vy=0.0))
        w.obstacles.append(Obstacle(0.3, 0.0, 0.05))
        for _ in range(60):
            sim.step()
        assert w.ball.x < 0.3 - 0.05  # never passed through


class TestRobotMotion:
    def test_acceleration_limited(self):
        sim, w = make_sim(RobotState(0))
        sim.step({0: Actuation(vx=1.0)})
        assert w.robots[0].vx == pytest.approx(CFG.max_accel * DT)

    def test_hard_stop_zeroes_velocity_in_one_step(self):
        sim, w = make_sim(RobotState(0, vx=0.9, vy=0.3, omega=2.0))
        sim.step({0: Actuation(hard_stop=True)})
        r = w.robots[0]
        assert (r.vx, r.vy, r.omega) == (0.0, 0.0, 0.0)

    def test_missing_actuation_means_hard_stop(self):
        sim, w = make_sim(RobotState(0, vx=0.9))
        sim.step({})
        assert w.robots[0].vx == 0.0

    def test_walls_contain_the_robot(self):
        cfg = SafetyConfig()
        sim, w = make_sim(RobotState(0, x=cfg.inset_x - 0.02))
        for _ in range(120):
            sim.step({0: Actuation(vx=1.0)})
        r = w.robots[0]
        assert r.x <= cfg.inset_x + 1e-12
        assert r.vx == 0.0  # wall killed the inward velocity

    def test_heading_wraps(self):
        sim, w = make_sim(RobotState(0, theta=math.pi - 0.01))
        sim.step({0: Actuation(omega=3.0)})
        assert -math.pi < w.robots[0].theta <= math.pi

    def test_obstacle_blocks_robot(self):
        sim, w = make_sim(RobotState(0, x=0.0))
        w.obstacles.append(Obstacle(0.3, 0.0, 0.05))
        for _ in range(240):
            sim.step({0: Actuation(vx=1.0)})
        min_dist = sim.config.robot_radius + 0.05
        assert math.hypot(w.robots[0].x - 0.3, w.robots[0].y) >= min_dist - 1e-9


class TestDeterminism:
    def test_same_commands_same_trajectory(self):
        def run():
            sim, w = make_sim(
                RobotState(0, x=-1.0, y=-0.5),
                RobotState(1, x=1.0, y=0.5, theta=math.pi),
                ball=BallState(0.2, 0.1, vx=0.4, vy=-0.2),
            )
            guard = CommandGuard(sim.config)
            guard.admit(Command(0, MoveTo(0.8, 0.3)), w)
            guard.admit(Command(1, MoveTo(-0.8, -0.3)), w)
            for step in range(300):
                if step % 100 == 0:
                    guard.admit(Command(0, MoveTo(0.8, 0.3)), w)
                    guard.admit(Command(1, MoveTo(-0.8, -0.3)), w)
                sim.step(guard.tick(w))
            return [
                (r.x, r.y, r.theta, r.vx, r.vy) for r in w.robots
            ] + [(w.ball.x, w.ball.y, w.ball.vx, w.ball.vy)]

        assert run() == run()

    def test_time_advances_by_period(self):
        sim, w = make_sim(RobotState(0))
        for _ in range(60):
            sim.step()
        assert w.time == pytest.approx(1.0)


class TestAngles:
    @pytest.mark.parametrize(
        "angle,expected",
        [
            (0.0, 0.0),
            (math.pi, math.pi),
            (-math.pi, math.pi),
            (3 * math.pi, math.pi),
            (2 * math.pi, 0.0),
            (math.pi + 0.1, -math.pi + 0.1),
        ],
    )
    def test_wrap_angle(self, angle, expected):
        assert wrap_angle(angle) == pytest.approx(expected)
