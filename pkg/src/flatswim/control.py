"""Teleoperation command semantics and the light-seeking controller.

Commands map to fin activation sets with a preprogrammed burst duration;
a new command preempts the running burst. Phototaxis reads four outward
facing light sensors and steers toward the brightest direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from flatswim.thrust import ModuleDesign

COMMAND_KINDS = (
    "forward",
    "backward",
    "turn_left",
    "turn_right",
    "side_left",
    "side_right",
    "rotate_cw",
    "rotate_ccw",
    "stop",
)
COMMAND_SOURCES = ("teleop", "autonomy", "script")

# Commands that require the 4-actuator design.
FOUR_ACT_ONLY = frozenset({"backward", "side_left", "side_right", "rotate_cw", "rotate_ccw"})

DEFAULT_BURST_DURATION = 0.5
DEFAULT_DEADBAND_RATIO = 1.1
MIN_SENSOR_DISTANCE = 1e-3

# Outward sensor normals relative to heading: front, right, back, left.
SENSOR_ANGLES = (0.0, -math.pi / 2.0, math.pi, math.pi / 2.0)


@dataclass(frozen=True)
class Command:
    kind: str
    source: str = "script"

    def __post_init__(self) -> None:
        if self.kind not in COMMAND_KINDS:
            raise ValueError(f"unknown command kind {self.kind!r}")
        if self.source not in COMMAND_SOURCES:
            raise ValueError(f"unknown command source {self.source!r}")


@dataclass(frozen=True)
class LightSource:
    position: tuple[float, float]
    radiant_power: float = 1.0
    on: bool = True

    def __post_init__(self) -> None:
        if self.radiant_power < 0.0:
            raise ValueError("radiant power must be non-negative")


@dataclass(frozen=True)
class ActivationPlan:
    active_set: frozenset[str]
    duration: float


# Per-command activation sets. Turning with a single fin follows the
# handedness convention of the dynamics: a thrusting right fin turns left.
_TWO_ACT_MAP = {
    "forward": frozenset({"L", "R"}),
    "turn_left": frozenset({"R"}),
    "turn_right": frozenset({"L"}),
    "stop": frozenset(),
}
_FOUR_ACT_MAP = {
    "forward": frozenset({"FL", "FR"}),
    "backward": frozenset({"RL", "RR"}),
    "turn_left": frozenset({"FR"}),
    "turn_right": frozenset({"FL"}),
    "side_left": frozenset({"FR", "RR"}),
    "side_right": frozenset({"FL", "RL"}),
    "rotate_ccw": frozenset({"FR", "RL"}),
    "rotate_cw": frozenset({"FL", "RR"}),
    "stop": frozenset(),
}


def teleop_step(
    cmd: Command,
    design: ModuleDesign,
    burst_duration: float = DEFAULT_BURST_DURATION,
) -> ActivationPlan:
    """Activation plan for one command press; preempts any running burst."""
    table = _TWO_ACT_MAP if design.actuator_count == 2 else _FOUR_ACT_MAP
    if cmd.kind not in table:
        raise ValueError(f"command {cmd.kind!r} invalid for {design.actuator_count}-actuator design")
    active = table[cmd.kind]
    return ActivationPlan(active, 0.0 if cmd.kind == "stop" else burst_duration)


def sensor_reading(
    sensor_pose: tuple[tuple[float, float], float],
    source: LightSource,
    min_distance: float = MIN_SENSOR_DISTANCE,
) -> float:
    """Lambertian intensity of one source at a sensor (position, outward normal angle)."""
    if not source.on:
        return 0.0
    (sx, sy), normal = sensor_pose
    dx = source.position[0] - sx
    dy = source.position[1] - sy
    d = max(math.hypot(dx, dy), min_distance)
    cos_theta = (dx * math.cos(normal) + dy * math.sin(normal)) / d
    return source.radiant_power / d**2 * max(0.0, cos_theta)


def total_reading(
    sensor_pose: tuple[tuple[float, float], float],
    sources: list[LightSource],
    min_distance: float = MIN_SENSOR_DISTANCE,
) -> float:
    """Summed intensity over all (active) sources."""
    return sum(sensor_reading(sensor_pose, s, min_distance) for s in sources)


def sensor_poses(
    position: tuple[float, float], heading: float
) -> list[tuple[tuple[float, float], float]]:
    """Poses of the four sensors (front, right, back, left) for a robot pose."""
    return [(position, heading + a) for a in SENSOR_ANGLES]


def phototaxis_policy(
    readings: tuple[float, float, float, float],
    deadband_ratio: float = DEFAULT_DEADBAND_RATIO,
) -> Command:
    """Steer toward the brightest of (front, right, back, left) readings.

    The winner must exceed the front reading by the deadband ratio before a
    turn is issued; ties resolve front > left > right > back.
    """
    front, right, back, left = readings
    best = max(readings)
    if best < deadband_ratio * front or best == front:
        return Command("forward", source="autonomy")
    if left == best:
        return Command("turn_left", source="autonomy")
    if right == best:
        return Command("turn_right", source="autonomy")
    # Source behind: rotate toward the brighter flank.
    if left >= right:
        return Command("turn_left", source="autonomy")
    return Command("turn_right", source="autonomy")
