"""Closed-form electrostatics of the zipping electrohydraulic actuator.

All quantities are SI. In the zipped state the electrodes are separated by
the solid dielectric plus a thin residual liquid layer; that series stack
sets the effective capacitance, which in turn governs both the Maxwell
force scale and the charge/discharge drive power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS0 = 8.854e-12  # vacuum permittivity, F/m

# Typical relative permittivity of the fluorocarbon liquid dielectric.
# A configuration constant, not a measured value.
DEFAULT_LIQUID_PERMITTIVITY = 1.9

# Residual liquid gap in the zipped state (m); configurable per stack.
DEFAULT_ZIPPED_GAP = 2e-6

BIPOLAR_WAVEFORMS = ("bipolar-square", "bipolar-triangle")


@dataclass(frozen=True)
class ActuatorStack:
    """Dielectric layer stack of one actuator in the zipped state.

    eps_s, eps_l are relative permittivities; t_s and t_l1 are the solid
    thickness and residual liquid gap in meters; area is the zipped
    electrode area in m^2.
    """

    eps_s: float
    t_s: float
    eps_l: float = DEFAULT_LIQUID_PERMITTIVITY
    t_l1: float = DEFAULT_ZIPPED_GAP
    area: float = 90e-6

    def __post_init__(self) -> None:
        if self.eps_s < 1.0 or self.eps_l < 1.0:
            raise ValueError("relative permittivities must be >= 1")
        if self.t_s <= 0.0:
            raise ValueError("solid dielectric thickness must be positive")
        if self.t_l1 < 0.0:
            raise ValueError("zipped liquid gap must be non-negative")
        if self.area <= 0.0:
            raise ValueError("electrode area must be positive")


@dataclass(frozen=True)
class DriveSignal:
    """Bipolar drive waveform applied by the full bridge."""

    waveform: str = "bipolar-square"
    amplitude: float = 0.0
    signal_frequency: float = 0.0

    def __post_init__(self) -> None:
        if self.waveform not in BIPOLAR_WAVEFORMS:
            raise ValueError(f"unknown waveform {self.waveform!r}")
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be non-negative")
        if self.signal_frequency < 0.0:
            raise ValueError("signal frequency must be non-negative")


def effective_capacitance(stack: ActuatorStack) -> float:
    """Capacitance of the zipped region in farads.

    Series combination of solid dielectric and residual liquid layer:
    eps0 * A * eps_s * eps_l / (t_s * eps_l + t_l1 * eps_s).
    """
    return (
        EPS0
        * stack.area
        * stack.eps_s
        * stack.eps_l
        / (stack.t_s * stack.eps_l + stack.t_l1 * stack.eps_s)
    )


def variant_gain(
    stack_a: ActuatorStack, stack_b: ActuatorStack
) -> tuple[float, float]:
    """Capacitance gain of stack_b over stack_a and equal-force voltage reduction.

    The force scales with U^2 * C, so matching force allows the drive
    voltage to drop by sqrt(capacitance_gain).
    """
    if stack_a.area != stack_b.area:
        raise ValueError("variant comparison requires equal electrode areas")
    gain = effective_capacitance(stack_b) / effective_capacitance(stack_a)
    return gain, math.sqrt(gain)


def force_scale(stack: ActuatorStack, voltage: float) -> float:
    """Relative Maxwell-force scale at drive voltage U (geometric factor omitted).

    Returns 0.5 * U^2 * eps_s * eps_l / (t_s * eps_l + t_l1 * eps_s). Only
    ratios between stacks are meaningful; absolute thrust comes from the
    empirical calibration in :mod:`flatswim.thrust`.
    """
    if voltage < 0.0:
        raise ValueError("voltage must be non-negative")
    return (
        0.5
        * voltage**2
        * stack.eps_s
        * stack.eps_l
        / (stack.t_s * stack.eps_l + stack.t_l1 * stack.eps_s)
    )


def drive_power(c_eff: float, f_act: float, voltage: float) -> float:
    """Average electrical power C*f*U^2/2 to cycle the zipped capacitance."""
    if c_eff < 0.0 or f_act < 0.0 or voltage < 0.0:
        raise ValueError("capacitance, frequency, and voltage must be non-negative")
    return c_eff * f_act * voltage**2 / 2.0


def capacitance_from_power_sweep(
    samples: list[tuple[float, float]], voltage: float
) -> float:
    """Recover the effective capacitance from a power-vs-frequency sweep.

    Least-squares slope of power against actuation frequency, divided by
    U^2/2. Inverts :func:`drive_power` exactly on noise-free data.
    """
    if voltage <= 0.0:
        raise ValueError("voltage must be positive")
    if len(samples) < 2:
        raise ValueError("sweep needs at least two samples")
    freqs = [f for f, _ in samples]
    powers = [p for _, p in samples]
    fbar = sum(freqs) / len(freqs)
    pbar = sum(powers) / len(powers)
    sff = sum((f - fbar) ** 2 for f in freqs)
    if sff == 0.0:
        raise ValueError("sweep is degenerate: all frequencies equal")
    sfp = sum((f - fbar) * (p - pbar) for f, p in zip(freqs, powers))
    slope = sfp / sff
    return slope / (voltage**2 / 2.0)


def actuation_frequency(signal: DriveSignal) -> float:
    """Mechanical actuation frequency of a bipolar drive.

    The actuator responds to U^2, so each bipolar period charges twice:
    the actuation frequency is twice the signal frequency.
    """
    return 2.0 * signal.signal_frequency
