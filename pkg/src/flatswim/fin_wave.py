"""Traveling-wave geometry of a soft undulating fin.

Wavelength is inversely proportional to actuation frequency; peak-to-peak
amplitude comes from a measured table. Profiles are sampled root-to-tip
with a clamped-root envelope for rendering and wave-metric checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Default peak-to-peak amplitude table (f_act Hz -> m). Monotone decreasing
# with frequency; configuration defaults, not measured data.
DEFAULT_AMPLITUDE_TABLE: list[tuple[float, float]] = [
    (10.0, 6.0e-3),
    (20.0, 5.0e-3),
    (30.0, 4.0e-3),
    (40.0, 3.2e-3),
    (60.0, 2.4e-3),
    (80.0, 2.0e-3),
]

DEFAULT_FIN_LENGTH = 45e-3

# Anchored to 1.5 waves on the fin at the 16 Hz underwater drive:
# kappa = L * 16 / 1.5.
DEFAULT_ANCHOR_FREQUENCY = 16.0
DEFAULT_ANCHOR_WAVE_COUNT = 1.5

# Fraction of fin length over which the clamped-root envelope ramps to 1.
ENVELOPE_RAMP_FRACTION = 0.2


def _default_wavelength_constant() -> float:
    return DEFAULT_FIN_LENGTH * DEFAULT_ANCHOR_FREQUENCY / DEFAULT_ANCHOR_WAVE_COUNT


@dataclass(frozen=True)
class FinWaveSpec:
    """Fin length, amplitude table, and the wavelength constant kappa (m*Hz)."""

    fin_length: float = DEFAULT_FIN_LENGTH
    amplitude_table: list[tuple[float, float]] = field(
        default_factory=lambda: list(DEFAULT_AMPLITUDE_TABLE)
    )
    wavelength_constant: float = field(default_factory=_default_wavelength_constant)

    def __post_init__(self) -> None:
        if self.fin_length <= 0.0:
            raise ValueError("fin length must be positive")
        if self.wavelength_constant <= 0.0:
            raise ValueError("wavelength constant must be positive")
        freqs = [f for f, _ in self.amplitude_table]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("amplitude table frequencies must be strictly increasing")
        if any(a < 0.0 for _, a in self.amplitude_table):
            raise ValueError("amplitudes must be non-negative")


def wavelength_at(spec: FinWaveSpec, f_act: float) -> float:
    """Traveling-wave wavelength kappa / f_act."""
    if f_act <= 0.0:
        raise ValueError("actuation frequency must be positive")
    return spec.wavelength_constant / f_act


def wave_count(spec: FinWaveSpec, f_act: float) -> float:
    """Number of wavelengths present on the fin, L / lambda = L*f/kappa."""
    return spec.fin_length / wavelength_at(spec, f_act)


def amplitude_at(spec: FinWaveSpec, f_act: float) -> float:
    """Peak-to-peak amplitude by piecewise-linear interpolation, clamped at ends."""
    table = spec.amplitude_table
    if not table:
        return 0.0
    if f_act <= table[0][0]:
        return table[0][1]
    if f_act >= table[-1][0]:
        return table[-1][1]
    for (f0, a0), (f1, a1) in zip(table, table[1:]):
        if f0 <= f_act <= f1:
            u = (f_act - f0) / (f1 - f0)
            return a0 + u * (a1 - a0)
    raise AssertionError("unreachable: table scan failed")


def _envelope(x: float, fin_length: float) -> float:
    # Smoothstep over the first fraction of the fin; root is clamped.
    ramp = ENVELOPE_RAMP_FRACTION * fin_length
    if x <= 0.0:
        return 0.0
    if x >= ramp:
        return 1.0
    u = x / ramp
    return u * u * (3.0 - 2.0 * u)


def fin_profile(
    spec: FinWaveSpec, f_act: float, t: float, samples: int
) -> list[tuple[float, float]]:
    """Sample the fin deflection profile z(x, t) at `samples` points root-to-tip.

    z(x,t) = env(x) * A_pp(f)/2 * sin(2*pi*(x/lambda - f*t)), with the
    envelope zero at the clamped root and 1 from 20% of the length onward.
    """
    if samples < 2:
        raise ValueError("need at least two profile samples")
    lam = wavelength_at(spec, f_act)
    half_amp = amplitude_at(spec, f_act) / 2.0
    pts = []
    for i in range(samples):
        x = spec.fin_length * i / (samples - 1)
        z = (
            _envelope(x, spec.fin_length)
            * half_amp
            * math.sin(2.0 * math.pi * (x / lam - f_act * t))
        )
        pts.append((x, z))
    return pts
