import json

import pytest

from flatswim.scenario import (
    ScenarioError,
    bundled_scenario_path,
    load_bundled,
    load_scenario,
    parse_scenario,
)

MINIMAL = {"arena": {"width": 1.0, "height": 1.0}, "robot": {}, "seed": 1}


def test_minimal_scenario_gets_defaults():
    cfg = parse_scenario(MINIMAL)
    assert cfg.dt == 1e-3
    assert cfg.duration == 10.0
    assert cfg.robot.design.variant == "PET"
    assert cfg.robot.x == 0.5 and cfg.robot.y == 0.5
    assert cfg.telemetry.decimation_s == 0.01
    assert cfg.controller.mode == "script"


def test_obstacle_outside_arena_names_index():
    raw = dict(MINIMAL)
    raw["obstacles"] = [
        {"x": 0.5, "y": 0.5, "radius": 0.05, "mass": 0.1},
        {"x": 5.0, "y": 0.5, "radius": 0.05, "mass": 0.1},
    ]
    with pytest.raises(ScenarioError, match=r"obstacles\[1\]"):
        parse_scenario(raw)


def test_missing_seed_rejected():
    raw = {"arena": {"width": 1.0, "height": 1.0}, "robot": {}}
    with pytest.raises(ScenarioError, match="seed"):
        parse_scenario(raw)


def test_unknown_design_rejected():
    raw = dict(MINIMAL)
    raw["robot"] = {"variant": "NYLON"}
    with pytest.raises(ScenarioError, match="robot"):
        parse_scenario(raw)


def test_bad_timestep_rejected():
    raw = dict(MINIMAL)
    raw["dt"] = 0.01
    with pytest.raises(ScenarioError, match="dt"):
        parse_scenario(raw)


def test_script_must_be_ordered():
    raw = dict(MINIMAL)
    raw["controller"] = {"mode": "script", "script": [[1.0, "forward"], [0.5, "stop"]]}
    with pytest.raises(ScenarioError, match=r"script\[1\]"):
        parse_scenario(raw)


def test_unknown_script_command_rejected():
    raw = dict(MINIMAL)
    raw["controller"] = {"mode": "script", "script": [[0.0, "hover"]]}
    with pytest.raises(ScenarioError, match="hover"):
        parse_scenario(raw)


def test_push_101g_scenario_carries_obstacle_mass():
    cfg = load_bundled("push-101g")
    assert cfg.obstacles[0]["mass"] == pytest.approx(0.101)
    obstacles = cfg.make_obstacles()
    assert obstacles[0].mass == pytest.approx(0.101)


def test_all_bundled_scenarios_load():
    for name in (
        "tethered-2kv-forward",
        "tethered-turn",
        "untethered-forward",
        "untethered-turn",
        "four-actuator-forward",
        "four-actuator-backward",
        "four-actuator-side-left",
        "four-actuator-side-right",
        "four-actuator-rotate",
        "push-101g",
        "narrow-gap",
        "phototaxis-single-light",
        "phototaxis-sequence",
        "battery-depletion",
    ):
        cfg = load_bundled(name)
        assert cfg.name == name


def test_yaml_scenario_loads(tmp_path):
    path = tmp_path / "scn.yaml"
    path.write_text(
        "arena: {width: 1.0, height: 1.0}\nrobot: {x: 0.2, y: 0.3}\nseed: 4\n"
    )
    cfg = load_scenario(path)
    assert cfg.robot.x == 0.2 and cfg.robot.y == 0.3


def test_json_scenario_loads(tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(MINIMAL))
    cfg = load_scenario(path)
    assert cfg.seed == 1


def test_unknown_bundled_name():
    with pytest.raises(FileNotFoundError, match="available"):
        bundled_scenario_path("no-such-scenario")


def test_dynamics_overrides_apply():
    raw = dict(MINIMAL)
    raw["robot"] = {"dynamics": {"drag_quadratic": 0.5}}
    cfg = parse_scenario(raw)
    assert cfg.robot.params.drag_quadratic == 0.5
    # Untouched fields keep profile defaults.
    assert cfg.robot.params.fin_moment_arm == 0.015


def test_calibration_override_changes_thrust():
    from flatswim.engine import Simulation
    from flatswim.thrust import blocked_force

    raw = {
        "arena": {"width": 2.0, "height": 1.0},
        "robot": {"x": 0.3, "y": 0.5},
        "drive": {"mode": "direct", "voltage": 1700.0, "f_act": 40.0},
        "controller": {"mode": "script", "script": [[0.0, "forward", None]]},
        "calibration": {
            "designs": [
                {
                    "variant": "PET", "body_length_mm": 45, "fin_span_mm": 20,
                    "actuator_count": 2,
                    "voltage_anchors": [[1200.0, 0.0], [1700.0, 3.2]],
                }
            ]
        },
        "seed": 5,
        "duration": 1.0,
    }
    cfg = parse_scenario(raw)
    sim = Simulation(cfg)
    assert blocked_force(sim.cal, cfg.robot.design, 40.0, 1700.0) == 3.2
    # Untouched designs keep their bundled anchors.
    from flatswim.thrust import ModuleDesign

    assert blocked_force(sim.cal, ModuleDesign("PVDF", 45, 20, 2), 30.0, 500.0) == 0.8


def test_output_map_override_changes_voltage():
    import json
    from importlib import resources

    from flatswim.engine import Simulation

    grid = json.loads(
        resources.files("flatswim").joinpath("data/hvps_grid.json").read_text()
    )
    # Drop every loaded-output cell to half.
    for ch in ("1", "2"):
        grid["output_voltage"][ch] = [
            [v / 2.0 for v in row] for row in grid["output_voltage"][ch]
        ]
    raw = {
        "arena": {"width": 1.3, "height": 0.5},
        "robot": {"variant": "PVDF", "x": 0.2, "y": 0.25, "profile": "untethered",
                  "battery_mah": 30.0, "buoyancy_foam": True},
        "drive": {"mode": "hvps", "f_act": 30.0, "output_map": grid},
        "controller": {"mode": "script", "script": [[0.0, "forward", None]]},
        "seed": 6,
        "duration": 0.5,
    }
    cfg = parse_scenario(raw)
    sim = Simulation(cfg)
    for _ in range(50):
        sim.tick()
    # 310 V is below the 400 V PVDF threshold: no thrust at all.
    assert sim.robot.linear_velocity == (0.0, 0.0)


def test_invalid_calibration_override_rejected():
    raw = dict(MINIMAL)
    raw["calibration"] = {"designs": [{"variant": "PET"}]}
    with pytest.raises(ScenarioError, match="calibration"):
        parse_scenario(raw)
