"""The command guard: admission, clamps, kick gates, watchdog, separation."""

import math

import pytest

from robojs.guard import (
    Command,
    CommandGuard,
    Dribble,
    Halt,
    Kick,
    MoveTo,
    SafetyConfig,
    TurnTo,
)
from robojs.sim import BallState, RobotState, Simulator, WorldState

CFG = SafetyConfig()


def world(*robots: RobotState, ball: BallState | None = None) -> WorldState:
    return WorldState(robots=list(robots), ball=ball or BallState(x=1.5, y=1.0))


def one_robot(x=0.0, y=0.0, theta=0.0) -> WorldState:
    return world(RobotState(0, x=x, y=y, theta=theta))


class TestAdmission:
    def test_in_field_move_accepted_unchanged(self):
        guard = CommandGuard()
        skill, rejection = guard.admit(Command(0, MoveTo(0.5, -0.25)), one_robot())
        assert rejection is None
        assert (skill.x, skill.y) == (0.5, -0.25)

    def test_out_of_field_target_clamped_with_event(self):
        guard = CommandGuard()
        skill, rejection = guard.admit(Command(0, MoveTo(5.0, 5.0)), one_robot())
        assert rejection is None
        assert (skill.x, skill.y) == (CFG.inset_x, CFG.inset_y)
        assert any(e.kind == "clamp" for e in guard.events)

    def test_non_finite_target_rejected(self):
        guard = CommandGuard()
        for bad in (float("nan"), float("inf"), float("-inf")):
            _, rejection = guard.admit(Command(0, MoveTo(bad, 0.0)), one_robot())
            assert rejection is not None and rejection.reason == "bad-target"

    def test_turn_heading_wrapped(self):
        guard = CommandGuard()
        skill, rejection = guard.admit(
            Command(0, TurnTo(3 * math.pi)), one_robot()
        )
        assert rejection is None
        assert skill.heading == pytest.approx(math.pi)

    def test_unknown_robot_rejected(self):
        guard = CommandGuard()
        _, rejection = guard.admit(Command(9, Halt()), one_robot())
        assert rejection is not None and rejection.reason == "unknown-robot"

    def test_halt_halts_the_slot(self):
        guard = CommandGuard()
        w = one_robot()
        guard.admit(Command(0, MoveTo(1.0, 0.0)), w)
        skill, rejection = guard.admit(Command(0, Halt()), w)
        assert rejection is None
        acts = guard.tick(w)
        assert acts[0].hard_stop

    def test_dribble_toggles_actuation_flag(self):
        guard = CommandGuard()
        w = one_robot()
        guard.admit(Command(0, Dribble(True)), w)
        assert guard.tick(w)[0].dribble
        guard.admit(Command(0, Dribble(False)), w)
        assert not guard.tick(w)[0].dribble


class TestKickGates:
    def test_far_ball_rejected(self):
        guard = CommandGuard()
        w = world(RobotState(0), ball=BallState(x=1.5, y=0.0))
        _, rejection = guard.admit(Command(0, Kick(0.5)), w)
        assert rejection is not None
        assert rejection.reason == "kick-out-of-range"
        assert "1.50 m" in rejection.detail

    def test_ball_behind_robot_rejected(self):
        guard = CommandGuard()
        # Ball in reach but 180 degrees off the kicker face.
        w = world(RobotState(0, theta=0.0), ball=BallState(x=-0.15, y=0.0))
        _, rejection = guard.admit(Command(0, Kick(0.5)), w)
        assert rejection is not None
        assert rejection.reason == "kick-outside-cone"

    def test_ball_just_inside_cone_accepted(self):
        guard = CommandGuard()
        ang = math.radians(CFG.kick_cone_deg - 1.0)
        w = world(
            RobotState(0, theta=0.0),
            ball=BallState(x=0.15 * math.cos(ang), y=0.15 * math.sin(ang)),
        )
        skill, rejection = guard.admit(Command(0, Kick(0.5)), w)
        assert rejection is None and skill is not None

    def test_power_clamped_to_unit_range(self):
        guard = CommandGuard()
        w = world(RobotState(0, theta=0.0), ball=BallState(x=0.15, y=0.0))
        skill, _ = guard.admit(Command(0, Kick(7.0)), w)
        assert skill.power == 1.0
        skill, _ = guard.admit(Command(0, Kick(-2.0)), w)
        assert skill.power == 0.0

    def test_kick_fires_once_then_clears(self):
        guard = CommandGuard()
        w = world(RobotState(0, theta=0.0), ball=BallState(x=0.15, y=0.0))
        guard.admit(Command(0, Kick(0.5)), w)
        assert guard.tick(w)[0].kick_power == 0.5
        assert guard.tick(w)[0].kick_power is None


class TestSpeedClamp:
    def test_clamp_preserves_direction(self):
        guard = CommandGuard()
        vx, vy = guard.clamp_velocity(3.0, 4.0)
        assert math.hypot(vx, vy) == pytest.approx(CFG.max_speed)
        assert vy / vx == pytest.approx(4.0 / 3.0)

    def test_below_limit_untouched(self):
        guard = CommandGuard()
        assert guard.clamp_velocity(0.3, -0.4) == (0.3, -0.4)

    def test_long_drive_setpoint_sits_at_the_limit(self):
        guard = CommandGuard()
        w = one_robot(x=-1.5, y=-1.0)
        guard.admit(Command(0, MoveTo(1.5, 1.0)), w)
        act = guard.tick(w)[0]
        assert math.hypot(act.vx, act.vy) <= CFG.max_speed + 1e-12

    def test_turn_rate_clamped(self):
        guard = CommandGuard()
        w = one_robot(theta=0.0)
        guard.admit(Command(0, TurnTo(math.pi)), w)
        act = guard.tick(w)[0]
        assert abs(act.omega) <= CFG.max_omega + 1e-12


class TestWatchdog:
    def test_uncommanded_robot_halts_after_timeout(self):
        guard = CommandGuard()
        w = one_robot()
        w.time = 0.0
        guard.admit(Command(0, MoveTo(1.0, 0.0)), w)
        # Just inside the window: still driving.
        w.time = CFG.command_timeout
        assert not guard.tick(w)[0].hard_stop
        # One period beyond the window: halted, with an event.
        w.time = CFG.command_timeout + CFG.period
        act = guard.tick(w)[0]
        assert act.hard_stop
        assert any(
            e.kind == "halt" and "no command" in e.detail for e in guard.events
        )

    def test_fresh_command_rearms_the_watchdog(self):
        guard = CommandGuard()
        w = one_robot()
        w.time = 0.0
        guard.admit(Command(0, MoveTo(1.0, 0.0)), w)
        w.time = 4.0
        guard.admit(Command(0, MoveTo(1.0, 0.5)), w)
        w.time = 8.0  # 8 s after start, but only 4 s after the last command
        assert not guard.tick(w)[0].hard_stop

    def test_halted_robot_stays_stopped(self):
        guard = CommandGuard()
        w = one_robot()
        guard.admit(Command(0, Halt()), w)
        for _ in range(5):
            assert guard.tick(w)[0].hard_stop
            w.time += CFG.period

    def test_halt_all(self):
        guard = CommandGuard()
        w = world(RobotState(0), RobotState(1, x=1.0), RobotState(2, x=-1.0))
        for rid in range(3):
            guard.admit(Command(rid, MoveTo(0.5, 0.5)), w)
        guard.halt_all(w)
        acts = guard.tick(w)
        assert all(acts[rid].hard_stop for rid in range(3))


class TestCrashPrevention:
    def test_head_on_robots_keep_min_separation(self):
        cfg = SafetyConfig()
        w = world(
            RobotState(0, x=-0.8, y=0.0),
            RobotState(1, x=0.8, y=0.0),
        )
        guard = CommandGuard(cfg)
        sim = Simulator(w, cfg)
        # Aim each robot at the other's start; renew commands inside the
        # watchdog window so both keep driving.
        for step in range(600):  # 10 s
            if step % 120 == 0:
                guard.admit(Command(0, MoveTo(0.8, 0.0)), w)
                guard.admit(Command(1, MoveTo(-0.8, 0.0)), w)
            sim.step(guard.tick(w))
            a, b = w.robots
            gap = math.hypot(a.x - b.x, a.y - b.y)
            assert gap >= cfg.min_center_distance - 1e-9, f"step {step}: {gap}"

    def test_single_robot_unaffected(self):
        guard = CommandGuard()
        w = one_robot()
        guard.admit(Command(0, MoveTo(1.0, 0.0)), w)
        act = guard.tick(w)[0]
        assert math.hypot(act.vx, act.vy) > 0.0

    def test_stop_is_fallback_when_boxed_in(self):
        cfg = SafetyConfig()
        # Stationary robots already at the minimum distance: any motion
        # toward the other is unsafe, so the mover gets stopped.
        d = cfg.min_center_distance
        w = world(
            RobotState(0, x=0.0, y=0.0),
            RobotState(1, x=d, y=0.0),
        )
        guard = CommandGuard(cfg)
        guard.admit(Command(0, MoveTo(d, 0.0)), w)
        act = guard.tick(w)[0]
        # Whatever candidate won, it must not close the gap below minimum.
        assert math.hypot(act.vx, act.vy) == pytest.approx(0.0, abs=1e-12)
