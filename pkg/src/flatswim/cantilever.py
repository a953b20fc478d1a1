"""Virtual blocked-force instrument: clamped glass cantilever metrology.

Flexural rigidity is derived from the measured resonance frequency; the
quasi-static deflection profile under a point load gives a closed-form
inverse from sensor displacement to blocked propulsion force. Traces are
averaged over the steady window of the activation, excluding the initial
impact transient.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import pi
from pathlib import Path

# First clamped-free mode constant as printed in the source formula (3.5^2);
# the exact eigenvalue would be 1.875^2 = 3.516.
_MODE_CONSTANT_SQ = 3.5**2

DEFAULT_LENGTH = 67e-3
DEFAULT_CONTACT_POINT = 66e-3
DEFAULT_SENSOR_POINT = 50e-3

# Averaging window of the activation, seconds after drive onset.
AVERAGE_WINDOW = (2.5, 5.0)


def flexural_rigidity(f: float, rho: float, l: float) -> float:
    """EI in N*m^2 from resonance frequency f (Hz), mass/length rho (kg/m), length l (m).

    EI = (4*pi^2 / 3.5^2) * f^2 * rho * l^4.
    """
    if f <= 0.0 or rho <= 0.0 or l <= 0.0:
        raise ValueError("resonance frequency, mass density, and length must be positive")
    return (4.0 * pi**2 / _MODE_CONSTANT_SQ) * f**2 * rho * l**4


@dataclass(frozen=True)
class CantileverSpec:
    """Cantilever geometry plus either a resonance frequency or a direct EI."""

    rho: float = 0.936e-3
    length: float = DEFAULT_LENGTH
    contact_point: float = DEFAULT_CONTACT_POINT
    sensor_point: float = DEFAULT_SENSOR_POINT
    resonance: float | None = 55.576
    rigidity: float | None = None

    def __post_init__(self) -> None:
        if self.rho <= 0.0 or self.length <= 0.0:
            raise ValueError("rho and length must be positive")
        if not 0.0 < self.sensor_point <= self.length:
            raise ValueError("sensor point must lie in (0, length]")
        if not 0.0 < self.contact_point <= self.length:
            raise ValueError("contact point must lie in (0, length]")
        if (self.resonance is None) == (self.rigidity is None):
            raise ValueError("specify exactly one of resonance or rigidity")

    @property
    def ei(self) -> float:
        if self.rigidity is not None:
            return self.rigidity
        return flexural_rigidity(self.resonance, self.rho, self.length)


def deflection(x: float, force: float, b: float, ei: float) -> float:
    """Deflection at x of a clamped cantilever point-loaded at b.

    d = F*x^2*(3b - x)/(6*EI) up to the load point, then the tangent
    continuation F*b^2*(3x - b)/(6*EI) beyond it; value and slope are
    continuous at x = b.
    """
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x <= b:
        return force * x**2 * (3.0 * b - x) / (6.0 * ei)
    return force * b**2 * (3.0 * x - b) / (6.0 * ei)


def force_from_deflection(d_meas: float, a: float, b: float, ei: float) -> float:
    """Blocked force from the sensor deflection at x = a (closed-form inverse)."""
    if a <= 0.0:
        raise ValueError("sensor point must be positive")
    if a <= b:
        geom = a**2 * (3.0 * b - a) / 6.0
    else:
        geom = b**2 * (3.0 * a - b) / 6.0
    return d_meas * ei / geom


def measure_blocked_force(
    trace: list[tuple[float, float]], spec: CantileverSpec
) -> float:
    """Mean blocked force over the steady window of a (t, deflection) trace.

    Each sample is inverted to a force; the mean is taken over
    t in [2.5 s, 5 s] of the activation, excluding the initial impact.
    """
    t_lo, t_hi = AVERAGE_WINDOW
    if not trace or trace[-1][0] < t_hi:
        raise ValueError(f"trace must span at least {t_hi} s of activation")
    ei = spec.ei
    forces = [
        force_from_deflection(d, spec.sensor_point, spec.contact_point, ei)
        for t, d in trace
        if t_lo <= t <= t_hi
    ]
    if not forces:
        raise ValueError("no samples inside the averaging window")
    return sum(forces) / len(forces)


def read_trace_csv(path: str | Path) -> list[tuple[float, float]]:
    """Read a (t, d) trace from CSV with 't' and 'd' columns in SI units."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [(float(row["t"]), float(row["d"])) for row in reader]


def write_trace_csv(path: str | Path, trace: list[tuple[float, float]]) -> None:
    """Write a (t, d) trace to CSV in SI units."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "d"])
        writer.writerows(trace)
