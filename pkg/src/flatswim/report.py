"""Plot-ready artifact generation from telemetry and calibration data."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from flatswim import thrust
from flatswim.engine import TelemetryRow
from flatswim.flow.images import save_image
from flatswim.flow.lic import lic_render
from flatswim.flow.wake import WakeParams, synthesize_wake

REPORT_KINDS = ("speed-curve", "force-map", "lic-frame", "summary")

# A run is considered a turning maneuver above this steady rate.
TURNING_THRESHOLD_DEG_S = 10.0


def summarize_rows(rows: list[TelemetryRow], design: thrust.ModuleDesign | None = None) -> dict:
    """Summary statistics recomputable from telemetry rows alone."""
    if not rows:
        return {
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
        }
    speeds = [math.hypot(r.vx, r.vy) for r in rows]
    omegas = [abs(r.omega) for r in rows]
    t_end = rows[-1].t
    steady = [i for i, r in enumerate(rows) if r.t >= 0.8 * t_end]
    steady_speed = sum(speeds[i] for i in steady) / len(steady)
    steady_omega = sum(omegas[i] for i in steady) / len(steady)
    energy = sum(a.power_w * (b.t - a.t) for a, b in zip(rows, rows[1:]))
    out = {
        "rows": len(rows),
        "duration_s": t_end,
        "mean_speed": sum(speeds) / len(speeds),
        "max_speed": max(speeds),
        "steady_speed": steady_speed,
        "mean_abs_omega": sum(omegas) / len(omegas),
        "max_abs_omega": max(omegas),
        "steady_omega_deg_s": math.degrees(steady_omega),
        "distance_m": sum(math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(rows, rows[1:])),
        "energy_j": energy,
    }
    if design is not None:
        bl = design.body_length_mm * 1e-3
        cs = design.characteristic_size_mm * 1e-3
        out["bl_per_s"] = steady_speed / bl
        out["cs_per_s"] = steady_speed / cs
    return out


def report(
    rows: list[TelemetryRow],
    kind: str,
    out_dir: str | Path,
    seed: int = 0,
    calibration: thrust.ThrustCalibration | None = None,
    workers: int = 1,
) -> list[Path]:
    """Generate deterministic artifact files for the given report kind."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cal = calibration if calibration is not None else thrust.default_calibration()

    if kind == "speed-curve":
        path = out_dir / "speed_curve.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "speed", "omega_deg_s"])
            for r in rows:
                writer.writerow(
                    [repr(r.t), repr(math.hypot(r.vx, r.vy)), repr(math.degrees(r.omega))]
                )
        return [path]

    if kind == "force-map":
        path = out_dir / "force_map.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["variant", "body_length_mm", "fin_span_mm", "actuator_count",
                 "f_act_hz", "voltage_v", "force_mn"]
            )
            for key in sorted(cal.designs):
                variant, body, span, count = key
                design = thrust.ModuleDesign(variant, body, span, count)
                anchors = cal.designs[key]
                volts = [v for v, _ in anchors.voltage_anchors]
                volts.append(cal.extrapolation_clamp_v)
                for v in volts:
                    force = thrust.blocked_force(cal, design, anchors.f_opt_hz, v)
                    writer.writerow(
                        [variant, body, span, count, repr(anchors.f_opt_hz), repr(v), repr(force)]
                    )
        return [path]

    if kind == "lic-frame":
        summary = summarize_rows(rows)
        speed = max(summary["steady_speed"], 1e-4)
        mode = (
            "turning"
            if summary["steady_omega_deg_s"] > TURNING_THRESHOLD_DEG_S
            else "forward"
        )
        params = WakeParams(asymmetry=0.35) if mode == "turning" else WakeParams()
        fld = synthesize_wake(speed, mode, params)
        img = lic_render(fld, seed=seed, workers=workers)
        pgm = out_dir / "wake_lic.pgm"
        png = out_dir / "wake_lic.png"
        save_image(pgm, img)
        save_image(png, img)
        return [pgm, png]

    if kind == "summary":
        path = out_dir / "summary.json"
        path.write_text(json.dumps(summarize_rows(rows), indent=2, sort_keys=True) + "\n")
        return [path]

    raise ValueError(f"unknown report kind {kind!r}; expected one of {REPORT_KINDS}")
