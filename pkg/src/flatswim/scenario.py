"""Scenario configuration: schema, defaults, validation, and file loading.

Scenario files are JSON (YAML is accepted too) describing the arena, the
robot build and its drive, the controller, obstacles, and lights. Every
run is fully determined by the file: the seed feeds the analysis stages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from flatswim.dynamics import Arena, DynamicsParams, Obstacle, WrenchFactors
from flatswim.hvps import ConverterConfig
from flatswim.thrust import ModuleDesign
from flatswim.control import COMMAND_KINDS

# Calibration-fitted dynamics constants per build. The tethered profile is
# fitted to the 2 kV sprint (peak acceleration and steady speed) and the
# 1.7 kV single-fin rotation; the untethered profile to the HVPS-driven
# forward and turning speeds of the full robot with foam and tray.
DYNAMICS_PROFILES: dict[str, DynamicsParams] = {
    "tethered": DynamicsParams(
        effective_mass=6.184210526315789e-3,
        effective_inertia=2.5e-6,
        drag_quadratic=0.16319444444444445,
        rotational_drag=2.7356719583431204e-6,
        fin_moment_arm=0.015,
        contact_stiffness=50.0,
        footprint_radius=0.032,
    ),
    "untethered": DynamicsParams(
        effective_mass=1.2e-2,
        effective_inertia=5.0e-6,
        drag_quadratic=0.6661720843616104,
        rotational_drag=1.6057908773232985e-6,
        fin_moment_arm=0.015,
        contact_stiffness=50.0,
        footprint_radius=0.032,
    ),
}

CONTROLLER_MODES = ("script", "teleop", "phototaxis")
DRIVE_MODES = ("direct", "hvps")


class ScenarioError(ValueError):
    """Validation failure; message carries the offending field paths."""


@dataclass(frozen=True)
class ScriptEntry:
    t: float
    command: str
    # None latches the command until the next entry; a number bursts.
    duration: float | None = None


@dataclass(frozen=True)
class RobotConfig:
    design: ModuleDesign = ModuleDesign()
    x: float = 0.5
    y: float = 0.5
    heading: float = 0.0
    profile: str = "tethered"
    params: DynamicsParams = DYNAMICS_PROFILES["tethered"]
    wrench_factors: WrenchFactors = WrenchFactors()
    battery_mah: float | None = None
    battery_nominal_v: float = 3.7
    payload_g: float = 0.0
    buoyancy_foam: bool = False


@dataclass(frozen=True)
class DriveConfig:
    mode: str = "direct"
    voltage: float = 1700.0
    f_act: float = 40.0
    converter: ConverterConfig = ConverterConfig()
    # Optional full replacement of the converter anchor grid, same shape as
    # the bundled data file.
    output_map: dict | None = None


@dataclass(frozen=True)
class ControllerConfig:
    mode: str = "script"
    script: tuple[ScriptEntry, ...] = ()
    burst_s: float = 0.5
    deadband_ratio: float = 1.1


@dataclass(frozen=True)
class LightConfig:
    x: float
    y: float
    power: float = 1.0
    # On-intervals in sim time; None means always on.
    schedule: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class TelemetryConfig:
    decimation_s: float = 0.01


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    arena: Arena = Arena(1.0, 1.0)
    robot: RobotConfig = RobotConfig()
    drive: DriveConfig = DriveConfig()
    controller: ControllerConfig = ControllerConfig()
    obstacles: tuple[dict, ...] = ()
    lights: tuple[LightConfig, ...] = ()
    seed: int = 0
    dt: float = 1e-3
    duration: float = 10.0
    telemetry: TelemetryConfig = TelemetryConfig()
    stop_on_battery_empty: bool = False
    # Partial overrides merged over the bundled thrust calibration.
    calibration_overrides: dict | None = None

    def make_obstacles(self) -> list[Obstacle]:
        return [
            Obstacle(
                position=(o["x"], o["y"]),
                radius=o["radius"],
                mass=o["mass"],
                drag_quadratic=o.get("drag", 0.8),
            )
            for o in self.obstacles
        ]


def _require(raw: dict, key: str, path: str, errors: list[str]):
    if key not in raw:
        errors.append(f"{path}.{key}: missing required field")
        return None
    return raw[key]


def parse_scenario(raw: dict, name: str = "scenario") -> ScenarioConfig:
    """Build a validated ScenarioConfig from a plain dict."""
    errors: list[str] = []

    arena_raw = raw.get("arena", {})
    width = float(arena_raw.get("width", 1.0))
    height = float(arena_raw.get("height", 1.0))
    if width <= 0 or height <= 0:
        errors.append("arena: width and height must be positive")
        arena = Arena(1.0, 1.0)
    else:
        arena = Arena(width, height)

    robot_raw = raw.get("robot", {})
    try:
        design = ModuleDesign(
            variant=robot_raw.get("variant", "PET"),
            body_length_mm=int(robot_raw.get("body_length_mm", 45)),
            fin_span_mm=int(robot_raw.get("fin_span_mm", 20)),
            actuator_count=int(robot_raw.get("actuator_count", 2)),
        )
    except ValueError as exc:
        errors.append(f"robot: {exc}")
        design = ModuleDesign()
    profile = robot_raw.get("profile", "tethered")
    if profile not in DYNAMICS_PROFILES:
        errors.append(f"robot.profile: unknown profile {profile!r}")
        profile = "tethered"
    params = DYNAMICS_PROFILES[profile]
    overrides = robot_raw.get("dynamics", {})
    try:
        params = replace(params, **overrides)
    except (TypeError, ValueError) as exc:
        errors.append(f"robot.dynamics: {exc}")
    factors = WrenchFactors()
    try:
        factors = replace(factors, **robot_raw.get("wrench_factors", {}))
    except TypeError as exc:
        errors.append(f"robot.wrench_factors: {exc}")

    rx = float(robot_raw.get("x", arena.width / 2.0))
    ry = float(robot_raw.get("y", arena.height / 2.0))
    if not (0.0 <= rx <= arena.width and 0.0 <= ry <= arena.height):
        errors.append("robot: initial position outside arena")
    battery = robot_raw.get("battery_mah")
    robot = RobotConfig(
        design=design,
        x=rx,
        y=ry,
        heading=float(robot_raw.get("heading", 0.0)),
        profile=profile,
        params=params,
        wrench_factors=factors,
        battery_mah=None if battery is None else float(battery),
        battery_nominal_v=float(robot_raw.get("battery_nominal_v", 3.7)),
        payload_g=float(robot_raw.get("payload_g", 0.0)),
        buoyancy_foam=bool(robot_raw.get("buoyancy_foam", False)),
    )

    drive_raw = raw.get("drive", {})
    mode = drive_raw.get("mode", "direct")
    if mode not in DRIVE_MODES:
        errors.append(f"drive.mode: unknown mode {mode!r}")
        mode = "direct"
    conv_raw = drive_raw.get("converter", {})
    try:
        converter = ConverterConfig(
            pulse_width=float(conv_raw.get("pulse_width_us", 2.5)) * 1e-6,
            switching_frequency=float(conv_raw.get("switching_khz", 20.0)) * 1e3,
            input_voltage=float(conv_raw.get("input_voltage", 3.9)),
        )
    except ValueError as exc:
        errors.append(f"drive.converter: {exc}")
        converter = ConverterConfig()
    output_map = drive_raw.get("output_map")
    if output_map is not None:
        try:
            from flatswim.hvps import output_map_from_dict

            output_map_from_dict(output_map)
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"drive.output_map: {exc}")
            output_map = None
    drive = DriveConfig(
        mode=mode,
        voltage=float(drive_raw.get("voltage", 1700.0)),
        f_act=float(drive_raw.get("f_act", 40.0)),
        converter=converter,
        output_map=output_map,
    )
    if drive.voltage < 0 or drive.f_act < 0:
        errors.append("drive: voltage and f_act must be non-negative")

    ctrl_raw = raw.get("controller", {})
    cmode = ctrl_raw.get("mode", "script")
    if cmode not in CONTROLLER_MODES:
        errors.append(f"controller.mode: unknown mode {cmode!r}")
        cmode = "script"
    script: list[ScriptEntry] = []
    for i, entry in enumerate(ctrl_raw.get("script", [])):
        t_cmd = float(entry[0])
        kind = entry[1]
        dur = None if len(entry) < 3 or entry[2] is None else float(entry[2])
        if kind not in COMMAND_KINDS:
            errors.append(f"controller.script[{i}]: unknown command {kind!r}")
            continue
        if script and t_cmd < script[-1].t:
            errors.append(f"controller.script[{i}]: entries must be time-ordered")
        script.append(ScriptEntry(t_cmd, kind, dur))
    controller = ControllerConfig(
        mode=cmode,
        script=tuple(script),
        burst_s=float(ctrl_raw.get("burst_s", 0.5)),
        deadband_ratio=float(ctrl_raw.get("deadband_ratio", 1.1)),
    )

    obstacles = []
    for i, o in enumerate(raw.get("obstacles", [])):
        ox = _require(o, "x", f"obstacles[{i}]", errors)
        oy = _require(o, "y", f"obstacles[{i}]", errors)
        radius = _require(o, "radius", f"obstacles[{i}]", errors)
        mass = _require(o, "mass", f"obstacles[{i}]", errors)
        if None in (ox, oy, radius, mass):
            continue
        if radius <= 0 or mass <= 0:
            errors.append(f"obstacles[{i}]: radius and mass must be positive")
        if not (0.0 <= ox <= arena.width and 0.0 <= oy <= arena.height):
            errors.append(f"obstacles[{i}]: position outside arena")
        obstacles.append(
            {"x": float(ox), "y": float(oy), "radius": float(radius), "mass": float(mass),
             "drag": float(o.get("drag", 0.8))}
        )

    lights = []
    for i, l in enumerate(raw.get("lights", [])):
        lx = _require(l, "x", f"lights[{i}]", errors)
        ly = _require(l, "y", f"lights[{i}]", errors)
        if None in (lx, ly):
            continue
        power = float(l.get("power", 1.0))
        if power < 0:
            errors.append(f"lights[{i}].power: must be non-negative")
        schedule = l.get("schedule")
        lights.append(
            LightConfig(
                x=float(lx),
                y=float(ly),
                power=power,
                schedule=None if schedule is None else tuple((float(a), float(b)) for a, b in schedule),
            )
        )

    dt = float(raw.get("dt", 1e-3))
    if not 0.0 < dt <= 5e-3:
        errors.append("dt: must lie in (0, 0.005] s")
    duration = float(raw.get("duration", 10.0))
    if duration < 0:
        errors.append("duration: must be non-negative")
    if "seed" not in raw:
        errors.append("seed: required for deterministic runs")
    decimation = float(raw.get("telemetry", {}).get("decimation_s", 0.01))
    if decimation < dt:
        errors.append("telemetry.decimation_s: must be at least dt")

    calibration_overrides = raw.get("calibration")
    if calibration_overrides is not None:
        try:
            from flatswim.thrust import default_calibration, merge_calibration

            merge_calibration(default_calibration(), calibration_overrides)
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"calibration: {exc}")
            calibration_overrides = None

    if errors:
        raise ScenarioError("; ".join(errors))

    return ScenarioConfig(
        name=raw.get("name", name),
        arena=arena,
        robot=robot,
        drive=drive,
        controller=controller,
        obstacles=tuple(obstacles),
        lights=tuple(lights),
        seed=int(raw["seed"]),
        dt=dt,
        duration=duration,
        telemetry=TelemetryConfig(decimation_s=decimation),
        stop_on_battery_empty=bool(raw.get("stop_on_battery_empty", False)),
        calibration_overrides=calibration_overrides,
    )


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load, default-fill, and validate a scenario file (JSON or YAML)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() in (".yaml", ".yml"):
        import yaml

        raw = yaml.safe_load(text)
    else:
        raw = json.loads(text)
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: top level must be a mapping")
    return parse_scenario(raw, name=path.stem)


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package."""
    from importlib import resources

    base = resources.files("flatswim").joinpath("scenarios")
    candidate = base.joinpath(f"{name}.json")
    if not candidate.is_file():
        available = sorted(p.name for p in base.iterdir() if p.name.endswith(".json"))
        raise FileNotFoundError(f"no bundled scenario {name!r}; available: {available}")
    return Path(str(candidate))


def load_bundled(name: str) -> ScenarioConfig:
    return load_scenario(bundled_scenario_path(name))
