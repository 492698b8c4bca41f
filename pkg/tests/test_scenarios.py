"""Scenario presets, YAML loading, and layout validation."""

import math

import pytest

from robojs.sim import (
    PRESETS,
    AdversarySpec,
    Scenario,
    ScenarioError,
    get_scenario,
    load_scenario,
    scenario_from_dict,
    validate_scenario,
)


class TestPresets:
    def test_expected_presets_exist(self):
        assert {
            "empty",
            "maze",
            "collection",
            "tag",
            "penalty",
            "soccer-2v2",
        } <= set(PRESETS)

    def test_all_presets_validate_and_build(self):
        for scenario in PRESETS.values():
            validate_scenario(scenario)
            world = scenario.build_world()
            assert len(world.robots) == len(scenario.robots)
            assert (world.ball.x, world.ball.y) == scenario.ball

    def test_get_scenario_unknown_name(self):
        with pytest.raises(ScenarioError, match="presets:"):
            get_scenario("does-not-exist")

    def test_maze_has_obstacles(self):
        assert len(get_scenario("maze").obstacles) == 12

    def test_adversary_presets_reference_their_robots(self):
        tag = get_scenario("tag")
        assert tag.adversaries[0].policy == "chase"
        ids = {r[0] for r in tag.robots}
        assert tag.adversaries[0].robot_id in ids


class TestValidation:
    def test_robot_outside_field(self):
        s = Scenario("bad", "", robots=((0, 5.0, 0.0, 0.0),))
        with pytest.raises(ScenarioError, match="outside the field"):
            validate_scenario(s)

    def test_duplicate_robot_id(self):
        s = Scenario("bad", "", robots=((0, 0.0, 0.0, 0.0), (0, 1.0, 0.0, 0.0)))
        with pytest.raises(ScenarioError, match="duplicate robot id"):
            validate_scenario(s)

    def test_robots_too_close(self):
        s = Scenario("bad", "", robots=((0, 0.0, 0.0, 0.0), (1, 0.1, 0.0, 0.0)))
        with pytest.raises(ScenarioError, match="minimum"):
            validate_scenario(s)

    def test_ball_outside_field(self):
        s = Scenario("bad", "", robots=((0, 0.0, 0.0, 0.0),), ball=(9.0, 0.0))
        with pytest.raises(ScenarioError, match="ball"):
            validate_scenario(s)

    def test_obstacle_on_robot(self):
        s = Scenario(
            "bad",
            "",
            robots=((0, 0.0, 0.0, 0.0),),
            ball=(1.0, 0.0),
            obstacles=((0.05, 0.0, 0.09),),
        )
        with pytest.raises(ScenarioError, match="overlaps robot"):
            validate_scenario(s)

    def test_adversary_unknown_robot(self):
        s = Scenario(
            "bad",
            "",
            robots=((0, 0.0, 0.0, 0.0),),
            adversaries=(AdversarySpec(7, "chase"),),
        )
        with pytest.raises(ScenarioError, match="unknown robot"):
            validate_scenario(s)

    def test_adversary_unknown_policy(self):
        s = Scenario(
            "bad",
            "",
            robots=((0, 0.0, 0.0, 0.0),),
            adversaries=(AdversarySpec(0, "teleport"),),
        )
        with pytest.raises(ScenarioError, match="unknown adversary policy"):
            validate_scenario(s)


class TestLoading:
    def test_from_dict(self):
        s = scenario_from_dict(
            {
                "name": "drill",
                "robots": [
                    {"id": 0, "x": -1.0, "y": 0.0, "theta_deg": 90.0},
                    {"id": 1, "x": 1.0, "y": 0.0},
                ],
                "ball": {"x": 0.5, "y": -0.5},
                "obstacles": [{"x": 0.0, "y": 0.8}],
            }
        )
        assert s.name == "drill"
        assert s.robots[0][3] == pytest.approx(math.pi / 2)
        assert s.robots[1][3] == 0.0
        assert s.ball == (0.5, -0.5)
        assert s.obstacles[0][2] == 0.09  # default radius

    def test_from_dict_validates(self):
        with pytest.raises(ScenarioError):
            scenario_from_dict(
                {"robots": [{"id": 0, "x": 99.0, "y": 0.0}]}
            )

    def test_load_yaml_file(self, tmp_path):
        path = tmp_path / "drill.yaml"
        path.write_text(
            "robots:\n"
            "  - {id: 0, x: -1.0, y: 0.0}\n"
            "ball: {x: 0.3, y: 0.2}\n"
        )
        s = load_scenario(path)
        assert s.name == "drill"  # falls back to the file stem
        assert s.ball == (0.3, 0.2)

    def test_load_non_mapping_yaml(self, tmp_path):
        path = tmp_path / "junk.yaml"
        path.write_text("- just\n- a\n- list\n")
        with pytest.raises(ScenarioError, match="mapping"):
            load_scenario(path)

    def test_build_world_copies_are_independent(self):
        scenario = get_scenario("empty")
        w1, w2 = scenario.build_world(), scenario.build_world()
        w1.robots[0].x = 0.123
        assert w2.robots[0].x != 0.123
