"""Solvers that derive the fitted dynamics constants from measured anchors.

Each target set inverts the steady-state laws of the planar dynamics
(thrust = drag * v^2, torque = rotational drag * omega^2, mass from peak
acceleration) at its measured operating points. The bundled dynamics
profiles are the outputs of these solves.
"""

from __future__ import annotations

import math

from flatswim import hvps, thrust

# Measured operating-point targets used for fitting.
TETHERED_TOP_SPEED = 0.12  # m/s at the 2 kV point
TETHERED_PEAK_ACCEL = 0.38  # m/s^2 at the 2 kV point
TETHERED_TURN_DEG_S = 120.0  # single fin at 1.7 kV
UNTETHERED_SPEED = 0.0514  # m/s, HVPS two-channel drive
UNTETHERED_TURN_DEG_S = 195.0  # single channel
FOUR_ACT_FORWARD = 0.067
FOUR_ACT_BACKWARD = 0.064
FOUR_ACT_ROTATE_DEG_S = 95.0
FOUR_ACT_LATERAL_RANGE = (0.028, 0.041)

FIN_MOMENT_ARM = 0.015

TARGET_SETS = ("tethered", "untethered", "four-actuator", "all")


def calibrate(target: str, calibration: thrust.ThrustCalibration | None = None) -> dict:
    """Fitted constants for one anchor set (or 'all')."""
    cal = calibration if calibration is not None else thrust.default_calibration()
    if target == "all":
        return {
            name: calibrate(name, cal)
            for name in ("tethered", "untethered", "four-actuator")
        }
    if target == "tethered":
        design = thrust.ModuleDesign("PET", 45, 20, 2)
        thrust_2kv = thrust.blocked_force(cal, design, 40.0, 2000.0) * 1e-3
        per_fin_17 = thrust.blocked_force(cal, design, 40.0, 1700.0) * 1e-3 / 2.0
        omega = math.radians(TETHERED_TURN_DEG_S)
        return {
            "anchor_thrust_2kv_n": thrust_2kv,
            "effective_mass": thrust_2kv / TETHERED_PEAK_ACCEL,
            "drag_quadratic": thrust_2kv / TETHERED_TOP_SPEED**2,
            "rotational_drag": per_fin_17 * FIN_MOMENT_ARM / omega**2,
            "fin_moment_arm": FIN_MOMENT_ARM,
        }
    if target == "untethered":
        design = thrust.ModuleDesign("PVDF", 45, 20, 2)
        cfg = hvps.ConverterConfig()
        v2 = hvps.output_voltage(cfg, 2, 30.0)
        v1 = hvps.output_voltage(cfg, 1, 30.0)
        thrust_2ch = thrust.blocked_force(cal, design, 30.0, v2) * 1e-3
        per_fin_1ch = thrust.blocked_force(cal, design, 30.0, v1) * 1e-3 / 2.0
        omega = math.radians(UNTETHERED_TURN_DEG_S)
        return {
            "voltage_2ch": v2,
            "voltage_1ch": v1,
            "anchor_thrust_2ch_n": thrust_2ch,
            "drag_quadratic": thrust_2ch / UNTETHERED_SPEED**2,
            "rotational_drag": per_fin_1ch * FIN_MOMENT_ARM / omega**2,
            "fin_moment_arm": FIN_MOMENT_ARM,
        }
    if target == "four-actuator":
        tethered = calibrate("tethered", cal)
        cd = tethered["drag_quadratic"]
        cr = tethered["rotational_drag"]
        design = thrust.ModuleDesign("PET", 45, 20, 4)
        pair = thrust.blocked_force(cal, design, 40.0, 1700.0) * 1e-3
        per_fin = pair / 2.0
        omega = math.radians(FOUR_ACT_ROTATE_DEG_S)
        side_factor = 0.5
        lateral_speed = math.sqrt(side_factor * per_fin / cd)
        lo, hi = FOUR_ACT_LATERAL_RANGE
        return {
            "required_front_pair_n": cd * FOUR_ACT_FORWARD**2,
            "anchor_front_pair_n": pair,
            "rear_pair_efficiency": (FOUR_ACT_BACKWARD / FOUR_ACT_FORWARD) ** 2,
            "side_pair_factor": side_factor,
            "lateral_speed_m_s": lateral_speed,
            "lateral_in_range": lo <= lateral_speed <= hi,
            "diagonal_torque_factor": cr * omega**2 / (2.0 * per_fin * FIN_MOMENT_ARM),
        }
    raise ValueError(f"unknown calibration target {target!r}; expected one of {TARGET_SETS}")
