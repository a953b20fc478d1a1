"""Deterministic fixed-timestep simulation loop and telemetry.

One Simulation object owns the world and advances it tick by tick;
external command sources (scripts, the service, phototaxis) are serialized
through its queue and take effect on the next tick. Telemetry rows are
decimated to the configured cadence and written as CSV.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from flatswim import control, hvps, thrust
from flatswim.control import ActivationPlan, Command
from flatswim.dynamics import (
    Obstacle,
    RobotState,
    actuation_to_wrench,
    payload_check,
    resolve_contacts,
    step_obstacle,
    step_robot,
)
from flatswim.scenario import ScenarioConfig

TELEMETRY_COLUMNS = (
    "t",
    "x",
    "y",
    "theta",
    "vx",
    "vy",
    "omega",
    "active_set",
    "battery_J",
    "power_W",
)


@dataclass
class TelemetryRow:
    t: float
    x: float
    y: float
    theta: float
    vx: float
    vy: float
    omega: float
    active_set: str
    battery_j: float
    power_w: float

    def as_csv(self) -> list[str]:
        return [
            repr(self.t),
            repr(self.x),
            repr(self.y),
            repr(self.theta),
            repr(self.vx),
            repr(self.vy),
            repr(self.omega),
            self.active_set,
            repr(self.battery_j),
            repr(self.power_w),
        ]


def _format_active(active: frozenset[str]) -> str:
    return "+".join(sorted(active))


class Simulation:
    """Owns the world state; a single logical tick owner advances it."""

    def __init__(self, config: ScenarioConfig, calibration: thrust.ThrustCalibration | None = None):
        self.config = config
        if calibration is not None:
            self.cal = calibration
        else:
            self.cal = thrust.default_calibration()
            if config.calibration_overrides is not None:
                self.cal = thrust.merge_calibration(self.cal, config.calibration_overrides)
        self.output_map = (
            hvps.output_map_from_dict(config.drive.output_map)
            if config.drive.output_map is not None
            else None
        )
        self.design = config.robot.design
        self.params = config.robot.params
        self.factors = config.robot.wrench_factors
        rc = config.robot
        battery = (
            math.inf
            if rc.battery_mah is None
            else rc.battery_mah * 1e-3 * 3600.0 * rc.battery_nominal_v
        )
        sunk = payload_check(rc.payload_g * 1e-3, rc.buoyancy_foam) == "sinks"
        self.robot = RobotState(
            position=(rc.x, rc.y),
            heading=rc.heading,
            battery_charge=battery,
            sunk=sunk,
        )
        self.obstacles: list[Obstacle] = config.make_obstacles()
        self.lights_on: list[bool] = [lc.schedule is None for lc in config.lights]
        self._light_override: list[bool] = [False] * len(config.lights)
        self.t = 0.0
        self.tick_index = 0
        self.plan = ActivationPlan(frozenset(), 0.0)
        self.plan_until = 0.0
        self._script_pos = 0
        self._pending: list[Command] = []
        self.energy_j = 0.0
        self.power_w = 0.0
        self.battery_depleted_at: float | None = None
        self.last_f_act = 0.0

    # -- command ingestion ------------------------------------------------

    def inject(self, cmd: Command) -> float:
        """Queue a command; it takes effect on the next tick. Returns that tick's time."""
        self._pending.append(cmd)
        return self.t

    def set_light(self, index: int, on: bool) -> None:
        """Manual light control; overrides the schedule from now on."""
        if not 0 <= index < len(self.lights_on):
            raise IndexError(f"no light with id {index}")
        self._light_override[index] = True
        self.lights_on[index] = on

    # -- world inspection --------------------------------------------------

    def active_lights(self) -> list[control.LightSource]:
        return [
            control.LightSource(position=(lc.x, lc.y), radiant_power=lc.power, on=on)
            for lc, on in zip(self.config.lights, self.lights_on)
            if on
        ]

    def sensor_readings(self) -> tuple[float, float, float, float]:
        sources = self.active_lights()
        poses = control.sensor_poses(self.robot.position, self.robot.heading)
        return tuple(control.total_reading(p, sources) for p in poses)  # type: ignore[return-value]

    # -- tick --------------------------------------------------------------

    def _update_lights(self) -> None:
        for i, lc in enumerate(self.config.lights):
            if self._light_override[i] or lc.schedule is None:
                continue
            self.lights_on[i] = any(a <= self.t < b for a, b in lc.schedule)

    def _apply_command(self, cmd: Command, duration: float | None) -> None:
        plan = control.teleop_step(cmd, self.design, self.config.controller.burst_s)
        self.plan = plan
        if cmd.kind == "stop":
            self.plan_until = self.t
        elif duration is None:
            self.plan_until = math.inf
        else:
            self.plan_until = self.t + duration

    def _controller(self) -> None:
        cfg = self.config.controller
        if cfg.mode == "script":
            while self._script_pos < len(cfg.script) and cfg.script[self._script_pos].t <= self.t:
                entry = cfg.script[self._script_pos]
                self._script_pos += 1
                dur = entry.duration
                self._apply_command(Command(entry.command, source="script"), dur)
        elif cfg.mode == "phototaxis":
            if self.t >= self.plan_until:
                cmd = control.phototaxis_policy(self.sensor_readings(), cfg.deadband_ratio)
                self._apply_command(cmd, cfg.burst_s)
        # Injected commands (teleop or tests) preempt whatever is running.
        for cmd in self._pending:
            self._apply_command(cmd, cfg.burst_s)
        self._pending.clear()

    def _active_set(self) -> frozenset[str]:
        if self.t >= self.plan_until:
            return frozenset()
        return self.plan.active_set

    def _drive(self, active: frozenset[str]) -> tuple[float, float, float]:
        """(per_fin_force_N, f_act, power_W) for the current active set."""
        cfg = self.config.drive
        channels = min(2, len(active))
        dead = self.robot.battery_charge <= 0.0 or self.robot.failed or self.robot.sunk
        if cfg.mode == "hvps":
            if dead:
                return 0.0, cfg.f_act, 0.0
            mode = "driving" if channels >= 1 else "converter_on"
            state = hvps.PowerState(mode=mode, active_channels=channels, f_act=cfg.f_act)
            power = hvps.system_power(state)
            voltage = hvps.output_voltage(cfg.converter, channels, cfg.f_act, self.output_map)
        else:
            voltage = cfg.voltage
            if dead or not active:
                power = 0.0
            else:
                power = (
                    thrust.drive_power_estimate(self.cal, self.design, cfg.f_act, voltage)
                    * 1e-3
                    * len(active)
                    / self.design.actuator_count
                )
        if dead or not active:
            return 0.0, cfg.f_act, power
        module_force_mn = thrust.blocked_force(self.cal, self.design, cfg.f_act, voltage)
        deg = thrust.degradation_factor(
            self.robot.cycles, self.design.variant, self.cal.degradation[self.design.variant]
        )
        if deg.failed:
            self.robot.failed = True
            return 0.0, cfg.f_act, power
        per_fin = module_force_mn * 1e-3 / 2.0 * deg.factor
        return per_fin, cfg.f_act, power

    def tick(self) -> None:
        self._update_lights()
        self._controller()
        active = self._active_set()
        self.robot.active_set = active
        per_fin, f_act, power = self._drive(active)
        self.last_f_act = f_act
        self.power_w = power
        wrench = actuation_to_wrench(
            self.design, active, per_fin, self.factors, self.params.fin_moment_arm
        )
        contact_robot, contact_obs = resolve_contacts(
            self.robot, self.params, self.obstacles, self.config.arena
        )
        dt = self.config.dt
        step_robot(self.robot, self.params, wrench, contact_robot, power, f_act, dt)
        for obs, force in zip(self.obstacles, contact_obs):
            step_obstacle(obs, force, dt)
        self.energy_j += power * dt
        self.t += dt
        self.tick_index += 1
        if (
            self.battery_depleted_at is None
            and self.robot.battery_charge <= 0.0
            and self.config.robot.battery_mah is not None
        ):
            self.battery_depleted_at = self.t

    def telemetry_row(self) -> TelemetryRow:
        r = self.robot
        return TelemetryRow(
            t=self.t,
            x=r.position[0],
            y=r.position[1],
            theta=r.heading,
            vx=r.linear_velocity[0],
            vy=r.linear_velocity[1],
            omega=r.angular_velocity,
            active_set=_format_active(r.active_set),
            battery_j=r.battery_charge,
            power_w=self.power_w,
        )

    def fin_phase(self) -> float:
        """Traveling-wave phase in [0, 1) for rendering."""
        return math.fmod(self.t * self.last_f_act, 1.0)


@dataclass
class RunResult:
    rows: list[TelemetryRow]
    summary: dict
    telemetry_path: Path | None = None


def _summarize(rows: list[TelemetryRow], sim: Simulation) -> dict:
    cfg = sim.config
    design = cfg.robot.design
    if not rows:
        return {
            "scenario": cfg.name,
            "rows": 0,
            "duration_s": 0.0,
            "mean_speed": 0.0,
            "max_speed": 0.0,
            "steady_speed": 0.0,
            "mean_abs_omega": 0.0,
            "max_abs_omega": 0.0,
            "steady_omega_deg_s": 0.0,
            "distance_m": 0.0,
            "energy_j": 0.0,
            "bl_per_s": 0.0,
            "cs_per_s": 0.0,
            "battery_depleted_at_s": sim.battery_depleted_at,
        }
    speeds = [math.hypot(r.vx, r.vy) for r in rows]
    omegas = [abs(r.omega) for r in rows]
    t_end = rows[-1].t
    steady_rows = [i for i, r in enumerate(rows) if r.t >= 0.8 * t_end]
    steady_speed = sum(speeds[i] for i in steady_rows) / len(steady_rows)
    steady_omega = sum(omegas[i] for i in steady_rows) / len(steady_rows)
    distance = sum(
        math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(rows, rows[1:])
    )
    bl = design.body_length_mm * 1e-3
    cs = design.characteristic_size_mm * 1e-3
    return {
        "scenario": cfg.name,
        "rows": len(rows),
        "duration_s": t_end,
        "mean_speed": sum(speeds) / len(speeds),
        "max_speed": max(speeds),
        "steady_speed": steady_speed,
        "mean_abs_omega": sum(omegas) / len(omegas),
        "max_abs_omega": max(omegas),
        "steady_omega_deg_s": math.degrees(steady_omega),
        "distance_m": distance,
        "energy_j": sim.energy_j,
        "bl_per_s": steady_speed / bl,
        "cs_per_s": steady_speed / cs,
        "battery_depleted_at_s": sim.battery_depleted_at,
    }


def run(
    config: ScenarioConfig,
    telemetry_path: str | Path | None = None,
    workers: int = 1,
    calibration: thrust.ThrustCalibration | None = None,
) -> RunResult:
    """Run a scenario to completion; returns telemetry rows and a summary.

    The worker count only parallelizes downstream analysis jobs; the
    simulation itself is advanced by the single tick owner, so telemetry
    is identical for any worker count.
    """
    del workers  # reserved for analysis fan-out; the tick loop is serial
    sim = Simulation(config, calibration)
    n_steps = int(round(config.duration / config.dt))
    decim = max(1, int(round(config.telemetry.decimation_s / config.dt)))
    rows: list[TelemetryRow] = []
    for step in range(n_steps):
        if step % decim == 0:
            rows.append(sim.telemetry_row())
        sim.tick()
        if config.stop_on_battery_empty and sim.battery_depleted_at is not None:
            break
    if n_steps > 0:
        rows.append(sim.telemetry_row())
    summary = _summarize(rows, sim)
    out_path: Path | None = None
    if telemetry_path is not None:
        out_path = Path(telemetry_path)
        write_telemetry(out_path, rows)
    return RunResult(rows=rows, summary=summary, telemetry_path=out_path)


def write_telemetry(path: str | Path, rows: list[TelemetryRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TELEMETRY_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())


def read_telemetry(path: str | Path) -> list[TelemetryRow]:
    rows: list[TelemetryRow] = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                TelemetryRow(
                    t=float(rec["t"]),
                    x=float(rec["x"]),
                    y=float(rec["y"]),
                    theta=float(rec["theta"]),
                    vx=float(rec["vx"]),
                    vy=float(rec["vy"]),
                    omega=float(rec["omega"]),
                    active_set=rec["active_set"],
                    battery_j=float(rec["battery_J"]),
                    power_w=float(rec["power_W"]),
                )
            )
    return rows
