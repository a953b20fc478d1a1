"""Empirical blocked-force response surface of the locomotion modules.

Blocked force as a function of dielectric variant, module design, actuation
frequency, and drive voltage is anchored on measured values and filled in
with monotone defaults. The frequency response enters as a separable
multiplier around each design's optimal frequency. Lifetime degradation is
a cycle-count decay to a plateau.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

VARIANTS = ("PET", "PVDF")
BODY_LENGTHS_MM = (25, 35, 45)
FIN_SPANS_MM = (10, 15, 20, 25, 30)
ACTUATOR_COUNTS = (2, 4)


@dataclass(frozen=True)
class ModuleDesign:
    """One point in the design space of flat locomotion modules."""

    variant: str = "PET"
    body_length_mm: int = 45
    fin_span_mm: int = 20
    actuator_count: int = 2

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown dielectric variant {self.variant!r}")
        if self.body_length_mm not in BODY_LENGTHS_MM:
            raise ValueError(f"body length must be one of {BODY_LENGTHS_MM} mm")
        if self.fin_span_mm not in FIN_SPANS_MM:
            raise ValueError(f"fin span must be one of {FIN_SPANS_MM} mm")
        if self.actuator_count not in ACTUATOR_COUNTS:
            raise ValueError("actuator count must be 2 or 4")
        if self.actuator_count == 4 and self.body_length_mm != 45:
            raise ValueError("4-actuator designs exist only at 45 mm body length")

    @property
    def width_mm(self) -> float:
        """Overall module width: fins plus central body strip."""
        if self.body_length_mm == 45:
            return 2.0 * self.fin_span_mm + 15.0
        return self.body_length_mm * 55.0 / 45.0

    @property
    def characteristic_size_mm(self) -> float:
        return max(self.body_length_mm, self.width_mm)

    def key(self) -> tuple[str, int, int, int]:
        return (self.variant, self.body_length_mm, self.fin_span_mm, self.actuator_count)


@dataclass(frozen=True)
class DesignAnchors:
    """Calibration record for one design."""

    f_opt_hz: float
    peak_force_mn: float
    power_at_peak_mw: float
    voltage_anchors: tuple[tuple[float, float], ...]
    source: str = "fitted-default"

    def __post_init__(self) -> None:
        volts = [v for v, _ in self.voltage_anchors]
        forces = [f for _, f in self.voltage_anchors]
        if len(volts) < 2:
            raise ValueError("need at least two voltage anchors")
        if any(b <= a for a, b in zip(volts, volts[1:])):
            raise ValueError("anchor voltages must be strictly increasing")
        if forces[0] != 0.0:
            raise ValueError("anchors must start at (threshold, 0)")
        if any(f < 0.0 for f in forces) or any(b < a for a, b in zip(forces, forces[1:])):
            raise ValueError("anchor forces must be non-negative and non-decreasing")


@dataclass(frozen=True)
class DegradationProfile:
    stable_cycles: float
    plateau_cycles: float
    plateau_factor: float
    lifetime_cycles: float

    def __post_init__(self) -> None:
        if not 0.4 <= self.plateau_factor <= 0.5:
            raise ValueError("plateau factor must lie in [0.4, 0.5]")
        if not 0 < self.stable_cycles < self.plateau_cycles <= self.lifetime_cycles:
            raise ValueError("cycle milestones must be ordered")


@dataclass(frozen=True)
class ThrustCalibration:
    """Immutable calibration surface for all known designs."""

    threshold_voltage: dict[str, float]
    designs: dict[tuple[str, int, int, int], DesignAnchors]
    degradation: dict[str, DegradationProfile]
    frequency_halfwidth_hz: float = 20.0
    extrapolation_clamp_v: float = 2000.0

    def anchors_for(self, design: ModuleDesign) -> DesignAnchors:
        try:
            return self.designs[design.key()]
        except KeyError:
            raise KeyError(f"design {design} not present in calibration") from None


class Degradation(NamedTuple):
    factor: float
    failed: bool


def _design_key(row: dict) -> tuple[str, int, int, int]:
    return (
        row["variant"],
        int(row["body_length_mm"]),
        int(row["fin_span_mm"]),
        int(row["actuator_count"]),
    )


def calibration_from_dict(raw: dict) -> ThrustCalibration:
    designs = {}
    for row in raw["designs"]:
        designs[_design_key(row)] = DesignAnchors(
            f_opt_hz=float(row["f_opt_hz"]),
            peak_force_mn=float(row["peak_force_mn"]),
            power_at_peak_mw=float(row["power_at_peak_mw"]),
            voltage_anchors=tuple((float(v), float(f)) for v, f in row["voltage_anchors"]),
            source=row.get("source", "fitted-default"),
        )
    degradation = {
        variant: DegradationProfile(
            stable_cycles=float(d["stable_cycles"]),
            plateau_cycles=float(d["plateau_cycles"]),
            plateau_factor=float(d["plateau_factor"]),
            lifetime_cycles=float(d["lifetime_cycles"]),
        )
        for variant, d in raw["degradation"].items()
    }
    return ThrustCalibration(
        threshold_voltage={k: float(v) for k, v in raw["threshold_voltage"].items()},
        designs=designs,
        degradation=degradation,
        frequency_halfwidth_hz=float(raw["frequency_halfwidth_hz"]),
        extrapolation_clamp_v=float(raw["extrapolation_clamp_v"]),
    )


def load_calibration(path: str | None = None) -> ThrustCalibration:
    """Load the bundled calibration file, or a user-supplied one."""
    if path is None:
        text = (
            resources.files("flatswim").joinpath("data/thrust_calibration.json").read_text()
        )
        raw = json.loads(text)
    else:
        with open(path) as fh:
            raw = json.load(fh)
    return calibration_from_dict(raw)


def merge_calibration(base: ThrustCalibration, overrides: dict) -> ThrustCalibration:
    """Apply partial scenario overrides to a calibration.

    Any anchor may be overridden: thresholds and global constants by key,
    per-design records by (variant, body, span, count) with only the
    changed fields present.
    """
    designs = dict(base.designs)
    for row in overrides.get("designs", []):
        key = _design_key(row)
        current = designs.get(key)
        if current is None:
            designs[key] = DesignAnchors(
                f_opt_hz=float(row["f_opt_hz"]),
                peak_force_mn=float(row["peak_force_mn"]),
                power_at_peak_mw=float(row["power_at_peak_mw"]),
                voltage_anchors=tuple(
                    (float(v), float(f)) for v, f in row["voltage_anchors"]
                ),
                source=row.get("source", "scenario-override"),
            )
        else:
            designs[key] = DesignAnchors(
                f_opt_hz=float(row.get("f_opt_hz", current.f_opt_hz)),
                peak_force_mn=float(row.get("peak_force_mn", current.peak_force_mn)),
                power_at_peak_mw=float(
                    row.get("power_at_peak_mw", current.power_at_peak_mw)
                ),
                voltage_anchors=tuple(
                    (float(v), float(f)) for v, f in row["voltage_anchors"]
                )
                if "voltage_anchors" in row
                else current.voltage_anchors,
                source=row.get("source", "scenario-override"),
            )
    thresholds = dict(base.threshold_voltage)
    thresholds.update(
        {k: float(v) for k, v in overrides.get("threshold_voltage", {}).items()}
    )
    degradation = dict(base.degradation)
    for variant, d in overrides.get("degradation", {}).items():
        current = degradation.get(variant)
        merged = {
            "stable_cycles": current.stable_cycles if current else None,
            "plateau_cycles": current.plateau_cycles if current else None,
            "plateau_factor": current.plateau_factor if current else None,
            "lifetime_cycles": current.lifetime_cycles if current else None,
        }
        merged.update(d)
        degradation[variant] = DegradationProfile(
            stable_cycles=float(merged["stable_cycles"]),
            plateau_cycles=float(merged["plateau_cycles"]),
            plateau_factor=float(merged["plateau_factor"]),
            lifetime_cycles=float(merged["lifetime_cycles"]),
        )
    return ThrustCalibration(
        threshold_voltage=thresholds,
        designs=designs,
        degradation=degradation,
        frequency_halfwidth_hz=float(
            overrides.get("frequency_halfwidth_hz", base.frequency_halfwidth_hz)
        ),
        extrapolation_clamp_v=float(
            overrides.get("extrapolation_clamp_v", base.extrapolation_clamp_v)
        ),
    )


_DEFAULT_CALIBRATION: ThrustCalibration | None = None


def default_calibration() -> ThrustCalibration:
    global _DEFAULT_CALIBRATION
    if _DEFAULT_CALIBRATION is None:
        _DEFAULT_CALIBRATION = load_calibration()
    return _DEFAULT_CALIBRATION


def frequency_response(cal: ThrustCalibration, design: ModuleDesign, f_act: float) -> float:
    """Separable frequency multiplier g(f): 1 at f_opt, 0.5 at f_opt +/- halfwidth."""
    anchors = cal.anchors_for(design)
    halfwidth = cal.frequency_halfwidth_hz
    return max(0.0, 1.0 - abs(f_act - anchors.f_opt_hz) / (2.0 * halfwidth))


def _interp_anchors(anchors: DesignAnchors, voltage: float, clamp_v: float) -> float:
    pts = anchors.voltage_anchors
    if voltage <= pts[0][0]:
        return 0.0
    if voltage > pts[-1][0]:
        # Continue the last piecewise slope up to the clamp voltage, then hold.
        (v0, f0), (v1, f1) = pts[-2], pts[-1]
        slope = (f1 - f0) / (v1 - v0)
        return f1 + slope * (min(voltage, clamp_v) - v1)
    for (v0, f0), (v1, f1) in zip(pts, pts[1:]):
        if voltage == v0:
            return f0
        if voltage == v1:
            return f1
        if v0 < voltage < v1:
            return f0 + (f1 - f0) * (voltage - v0) / (v1 - v0)
    raise AssertionError("unreachable: anchor scan failed")


def blocked_force(
    cal: ThrustCalibration, design: ModuleDesign, f_act: float, voltage: float
) -> float:
    """Blocked propulsion force in mN at (f_act, voltage) for the given design.

    Zero at or below the variant threshold, monotone piecewise-linear in
    voltage through the anchors, scaled by the frequency response.
    """
    anchors = cal.anchors_for(design)
    base = _interp_anchors(anchors, voltage, cal.extrapolation_clamp_v)
    return frequency_response(cal, design, f_act) * base


def design_peak(
    cal: ThrustCalibration, design: ModuleDesign
) -> tuple[float, float, float]:
    """Optimal actuation frequency, peak blocked force (mN), and power there (mW)."""
    a = cal.anchors_for(design)
    return (a.f_opt_hz, a.peak_force_mn, a.power_at_peak_mw)


def efficiency(force_mn: float, power_mw: float) -> float:
    """Blocked force per input electrical power, N/W (numerically mN/mW)."""
    if power_mw <= 0.0:
        raise ValueError("power must be positive")
    return force_mn / power_mw


def drive_power_estimate(
    cal: ThrustCalibration, design: ModuleDesign, f_act: float, voltage: float
) -> float:
    """Actuation power estimate in mW, scaled from the design's peak anchor.

    Power is linear in frequency and quadratic in voltage, pinned to the
    calibrated (f_opt, peak anchor voltage, power_at_peak) point.
    """
    a = cal.anchors_for(design)
    v_peak = a.voltage_anchors[-1][0]
    return a.power_at_peak_mw * (f_act / a.f_opt_hz) * (voltage / v_peak) ** 2


def degradation_factor(
    cycles: float, variant: str, profile: DegradationProfile | None = None
) -> Degradation:
    """Force multiplier after a cumulative number of actuation cycles.

    Unity during the initial stable window, then linear decay to the
    variant plateau; the module is flagged failed past its lifetime.
    """
    if cycles < 0:
        raise ValueError("cycle count must be non-negative")
    if profile is None:
        profile = default_calibration().degradation[variant]
    failed = cycles >= profile.lifetime_cycles
    if cycles <= profile.stable_cycles:
        return Degradation(1.0, failed)
    if cycles >= profile.plateau_cycles:
        return Degradation(profile.plateau_factor, failed)
    span = profile.plateau_cycles - profile.stable_cycles
    u = (cycles - profile.stable_cycles) / span
    return Degradation(1.0 + u * (profile.plateau_factor - 1.0), failed)
