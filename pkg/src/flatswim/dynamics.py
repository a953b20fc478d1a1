"""Planar rigid-body motion of the robot on the water surface.

Fin activations map to a body wrench, quadratic drag opposes translation
and rotation, and a fixed-timestep semi-implicit integrator advances the
state. Obstacle contact is a penalty normal force on overlapping discs;
obstacles drift under the received force minus their own drag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from flatswim.thrust import ModuleDesign

# Bare locomotion module sinks above this payload (kg); buoyancy foam lifts
# the limit entirely for the untethered build.
PAYLOAD_LIMIT_KG = 5.1e-3

MAX_TIMESTEP = 5e-3

TWO_ACT_IDS = frozenset({"L", "R"})
FOUR_ACT_IDS = frozenset({"FL", "FR", "RL", "RR"})

# Valid activation sets per design, beyond singles and empty.
_FOUR_ACT_PAIRS = {
    frozenset({"FL", "FR"}): "front",
    frozenset({"RL", "RR"}): "rear",
    frozenset({"FL", "RL"}): "left",
    frozenset({"FR", "RR"}): "right",
    frozenset({"FR", "RL"}): "diag_ccw",
    frozenset({"FL", "RR"}): "diag_cw",
}


@dataclass(slots=True)
class RobotState:
    """Pose, velocities, drive bookkeeping, and health flags of the robot."""

    position: tuple[float, float] = (0.0, 0.0)
    heading: float = 0.0
    linear_velocity: tuple[float, float] = (0.0, 0.0)
    angular_velocity: float = 0.0
    active_set: frozenset[str] = frozenset()
    battery_charge: float = math.inf
    cycles: float = 0.0
    sunk: bool = False
    failed: bool = False

    def copy(self) -> "RobotState":
        return replace(self)


@dataclass(frozen=True)
class DynamicsParams:
    """Effective-body constants; mass and drag values are calibration fits."""

    effective_mass: float = 6.184210526315789e-3
    effective_inertia: float = 2.5e-6
    drag_quadratic: float = 0.16319444444444445
    rotational_drag: float = 2.7356719583431204e-6
    fin_moment_arm: float = 0.015
    contact_stiffness: float = 50.0
    footprint_radius: float = 0.032

    def __post_init__(self) -> None:
        for name in (
            "effective_mass",
            "effective_inertia",
            "drag_quadratic",
            "rotational_drag",
            "fin_moment_arm",
            "contact_stiffness",
            "footprint_radius",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class WrenchFactors:
    """Relative strengths of the non-forward 4-actuator maneuvers.

    Fitted so steady speeds land on the measured forward/backward pair,
    the lateral bracket, and the diagonal-pair rotation rate.
    """

    rear_pair_efficiency: float = 0.9124526620628202
    side_pair_factor: float = 0.5
    diagonal_torque_factor: float = 0.6844153320409703


@dataclass(slots=True)
class Obstacle:
    """Floating disc obstacle."""

    position: tuple[float, float]
    radius: float
    mass: float
    drag_quadratic: float = 0.8
    velocity: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("obstacle radius must be positive")
        if self.mass <= 0.0:
            raise ValueError("obstacle mass must be positive")


@dataclass(frozen=True)
class Arena:
    """Axis-aligned water surface rectangle [0, width] x [0, height]."""

    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("arena dimensions must be positive")


def actuator_ids(design: ModuleDesign) -> frozenset[str]:
    return TWO_ACT_IDS if design.actuator_count == 2 else FOUR_ACT_IDS


def actuation_to_wrench(
    design: ModuleDesign,
    active_set: frozenset[str] | set[str],
    per_fin_force: float,
    factors: WrenchFactors = WrenchFactors(),
    fin_moment_arm: float = 0.015,
) -> tuple[float, float, float]:
    """Body-frame (fx, fy, torque) produced by the active fin set.

    Convention: +x forward, +y left, torque positive counter-clockwise.
    A thrusting right-side fin turns the robot counter-clockwise.
    """
    active = frozenset(active_set)
    if not active <= actuator_ids(design):
        raise ValueError(f"active set {set(active)} invalid for {design.actuator_count}-actuator design")
    f = per_fin_force
    arm = fin_moment_arm
    if not active:
        return (0.0, 0.0, 0.0)

    if design.actuator_count == 2:
        if active == TWO_ACT_IDS:
            return (2.0 * f, 0.0, 0.0)
        if active == {"R"}:
            return (f, 0.0, f * arm)
        if active == {"L"}:
            return (f, 0.0, -f * arm)
        raise AssertionError("unreachable: 2-actuator set")

    kind = _FOUR_ACT_PAIRS.get(active)
    if kind == "front":
        return (2.0 * f, 0.0, 0.0)
    if kind == "rear":
        return (-2.0 * f * factors.rear_pair_efficiency, 0.0, 0.0)
    if kind == "left":
        # Same-side pair pushes the body away from that side.
        return (0.0, -factors.side_pair_factor * f, 0.0)
    if kind == "right":
        return (0.0, factors.side_pair_factor * f, 0.0)
    if kind == "diag_ccw":
        return (0.0, 0.0, factors.diagonal_torque_factor * 2.0 * f * arm)
    if kind == "diag_cw":
        return (0.0, 0.0, -factors.diagonal_torque_factor * 2.0 * f * arm)
    if len(active) == 1:
        (fin,) = active
        rear = fin in ("RL", "RR")
        mag = f * (factors.rear_pair_efficiency if rear else 1.0)
        # Right-side thrust forward and left-side thrust backward are both CCW.
        ccw = {"FR": 1.0, "FL": -1.0, "RL": 1.0, "RR": -1.0}[fin]
        return (-mag if rear else mag, 0.0, ccw * mag * arm)
    raise ValueError(f"active set {set(active)} invalid for 4-actuator design")


def payload_check(module_payload: float, has_buoyancy_foam: bool = False) -> str:
    """Whether a loaded module floats or sinks; payload in kg."""
    if module_payload < 0.0:
        raise ValueError("payload must be non-negative")
    if has_buoyancy_foam:
        return "floats"
    return "sinks" if module_payload > PAYLOAD_LIMIT_KG else "floats"


def resolve_contacts(
    robot: RobotState,
    params: DynamicsParams,
    obstacles: list[Obstacle],
    arena: Arena | None = None,
) -> tuple[tuple[float, float], list[tuple[float, float]]]:
    """Penalty contact forces: (force on robot, force per obstacle), world frame.

    Disc-disc overlap produces a normal force of contact_stiffness times
    penetration, applied equal-and-opposite; no restitution. Arena walls
    push any overlapping disc back inside.
    """
    k = params.contact_stiffness
    rx, ry = robot.position
    rr = params.footprint_radius
    frx = fry = 0.0
    obstacle_forces: list[tuple[float, float]] = []
    for obs in obstacles:
        ox, oy = obs.position
        dx = rx - ox
        dy = ry - oy
        dist = math.hypot(dx, dy)
        min_dist = rr + obs.radius
        fx = fy = 0.0
        if dist < min_dist:
            if dist > 0.0:
                nx, ny = dx / dist, dy / dist
            else:
                nx, ny = 1.0, 0.0
            mag = k * (min_dist - dist)
            frx += mag * nx
            fry += mag * ny
            fx, fy = -mag * nx, -mag * ny
        if arena is not None:
            wx, wy = _wall_force(ox, oy, obs.radius, arena, k)
            fx += wx
            fy += wy
        obstacle_forces.append((fx, fy))
    if arena is not None:
        wx, wy = _wall_force(rx, ry, rr, arena, k)
        frx += wx
        fry += wy
    return (frx, fry), obstacle_forces


def _wall_force(x: float, y: float, r: float, arena: Arena, k: float) -> tuple[float, float]:
    fx = fy = 0.0
    if x - r < 0.0:
        fx += k * (r - x)
    if x + r > arena.width:
        fx -= k * (x + r - arena.width)
    if y - r < 0.0:
        fy += k * (r - y)
    if y + r > arena.height:
        fy -= k * (y + r - arena.height)
    return fx, fy


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def step_robot(
    robot: RobotState,
    params: DynamicsParams,
    body_wrench: tuple[float, float, float],
    external_force: tuple[float, float],
    power_w: float,
    f_act: float,
    dt: float,
) -> None:
    """Advance the robot one semi-implicit step in place.

    body_wrench is fin thrust in the body frame; external_force (world
    frame) carries contacts. Battery is decremented by the drawn power and
    the cycle counter by f_act*dt while fins are active.
    """
    if not 0.0 < dt <= MAX_TIMESTEP:
        raise ValueError(f"dt must lie in (0, {MAX_TIMESTEP}] s")
    fx_b, fy_b, torque = body_wrench
    if robot.sunk:
        fx_b = fy_b = torque = 0.0
    c, s = math.cos(robot.heading), math.sin(robot.heading)
    fx = c * fx_b - s * fy_b + external_force[0]
    fy = s * fx_b + c * fy_b + external_force[1]

    vx, vy = robot.linear_velocity
    speed = math.hypot(vx, vy)
    cd = params.drag_quadratic
    m = params.effective_mass
    vx += dt * (fx - cd * speed * vx) / m
    vy += dt * (fy - cd * speed * vy) / m
    px, py = robot.position
    robot.linear_velocity = (vx, vy)
    robot.position = (px + dt * vx, py + dt * vy)

    omega = robot.angular_velocity
    omega += dt * (torque - params.rotational_drag * abs(omega) * omega) / params.effective_inertia
    robot.angular_velocity = omega
    robot.heading = wrap_angle(robot.heading + dt * omega)

    if robot.battery_charge != math.inf:
        robot.battery_charge = max(0.0, robot.battery_charge - power_w * dt)
    if robot.active_set:
        robot.cycles += f_act * dt


def step_obstacle(obs: Obstacle, force: tuple[float, float], dt: float) -> None:
    """Advance one obstacle under the given world-frame force, in place."""
    vx, vy = obs.velocity
    speed = math.hypot(vx, vy)
    vx += dt * (force[0] - obs.drag_quadratic * speed * vx) / obs.mass
    vy += dt * (force[1] - obs.drag_quadratic * speed * vy) / obs.mass
    obs.velocity = (vx, vy)
    px, py = obs.position
    obs.position = (px + dt * vx, py + dt * vy)
