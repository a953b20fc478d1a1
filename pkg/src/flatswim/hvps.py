"""Flyback-converter output map, bipolar bridge drive, and system power budget.

The converter is open loop: output voltage is a lookup over the control
signal's pulse width and switching frequency, derated by the number of
driven actuator channels and (mildly) by actuation frequency. The power
budget carries the three measured system states: idle board, converter
running, and actuators driven.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from flatswim.actuator import DriveSignal, actuation_frequency

PULSE_WIDTH_RANGE = (1e-6, 3e-6)
SWITCHING_FREQ_RANGE = (1e3, 20e3)

IDLE_POWER_MW = 237.0
CONVERTER_POWER_MW = 530.0
# Additional draw when both actuators run at the 30 Hz reference point.
TWO_CHANNEL_INCREMENT_MW = 65.0
REFERENCE_F_ACT = 30.0

POWER_MODES = ("idle", "converter_on", "driving")


@dataclass(frozen=True)
class ConverterConfig:
    """Control parameters of the flyback converter's primary-side switch."""

    pulse_width: float = 2.5e-6
    switching_frequency: float = 20e3
    input_voltage: float = 3.9

    def __post_init__(self) -> None:
        lo, hi = PULSE_WIDTH_RANGE
        if not lo <= self.pulse_width <= hi:
            raise ValueError(f"pulse width must lie in [{lo}, {hi}] s")
        lo, hi = SWITCHING_FREQ_RANGE
        if not lo <= self.switching_frequency <= hi:
            raise ValueError(f"switching frequency must lie in [{lo}, {hi}] Hz")
        if self.input_voltage <= 0.0:
            raise ValueError("input voltage must be positive")


@dataclass(frozen=True)
class PowerState:
    """System operating mode for the power budget."""

    mode: str = "idle"
    active_channels: int = 0
    f_act: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in POWER_MODES:
            raise ValueError(f"unknown power mode {self.mode!r}")
        if self.active_channels not in (0, 1, 2):
            raise ValueError("active channels must be 0, 1, or 2")
        if self.mode == "driving" and self.active_channels < 1:
            raise ValueError("driving requires at least one active channel")


@dataclass(frozen=True)
class OutputMap:
    """Interpolation grids of converter output voltage per loaded channel count."""

    pulse_widths_us: tuple[float, ...]
    switching_khz: tuple[float, ...]
    grids: dict[int, tuple[tuple[float, ...], ...]]  # [fs][pw], volts
    reference_input_voltage: float = 3.9
    actuation_derating_per_hz: float = 0.002
    actuation_reference_hz: float = REFERENCE_F_ACT
    actuation_derating_floor: float = 0.5


def output_map_from_dict(raw: dict) -> OutputMap:
    return OutputMap(
        pulse_widths_us=tuple(raw["pulse_width_us"]),
        switching_khz=tuple(raw["switching_frequency_khz"]),
        grids={
            int(ch): tuple(tuple(row) for row in grid)
            for ch, grid in raw["output_voltage"].items()
        },
        reference_input_voltage=float(raw["reference_input_voltage"]),
        actuation_derating_per_hz=float(raw["actuation_derating_per_hz"]),
        actuation_reference_hz=float(raw["actuation_reference_hz"]),
        actuation_derating_floor=float(raw["actuation_derating_floor"]),
    )


def load_output_map(path: str | None = None) -> OutputMap:
    if path is None:
        text = resources.files("flatswim").joinpath("data/hvps_grid.json").read_text()
        raw = json.loads(text)
    else:
        with open(path) as fh:
            raw = json.load(fh)
    return output_map_from_dict(raw)


_DEFAULT_MAP: OutputMap | None = None


def default_output_map() -> OutputMap:
    global _DEFAULT_MAP
    if _DEFAULT_MAP is None:
        _DEFAULT_MAP = load_output_map()
    return _DEFAULT_MAP


def _bracket(values: tuple[float, ...], x: float) -> tuple[int, int, float]:
    # Index pair and interpolation weight; exact hits carry weight 0.
    if x <= values[0]:
        return 0, 0, 0.0
    if x >= values[-1]:
        n = len(values) - 1
        return n, n, 0.0
    for i in range(len(values) - 1):
        if values[i] <= x <= values[i + 1]:
            if x == values[i]:
                return i, i, 0.0
            if x == values[i + 1]:
                return i + 1, i + 1, 0.0
            w = (x - values[i]) / (values[i + 1] - values[i])
            return i, i + 1, w
    raise AssertionError("unreachable: bracket scan failed")


def output_voltage(
    cfg: ConverterConfig,
    active_channels: int,
    f_act: float = REFERENCE_F_ACT,
    output_map: OutputMap | None = None,
) -> float:
    """Converter output voltage under the given load, in volts.

    Bilinear interpolation over the per-channel-count anchor grid, scaled
    linearly by input voltage relative to the grid's reference and derated
    for actuation frequencies above the 30 Hz reference point.
    """
    if active_channels not in (0, 1, 2):
        raise ValueError("active channels must be 0, 1, or 2")
    if f_act < 0.0:
        raise ValueError("actuation frequency must be non-negative")
    omap = output_map if output_map is not None else default_output_map()
    grid = omap.grids[active_channels]
    pw_us = cfg.pulse_width * 1e6
    fs_khz = cfg.switching_frequency * 1e-3
    i0, i1, wi = _bracket(omap.pulse_widths_us, pw_us)
    j0, j1, wj = _bracket(omap.switching_khz, fs_khz)
    v = (
        grid[j0][i0] * (1 - wj) * (1 - wi)
        + grid[j0][i1] * (1 - wj) * wi
        + grid[j1][i0] * wj * (1 - wi)
        + grid[j1][i1] * wj * wi
    )
    if active_channels > 0 and f_act > omap.actuation_reference_hz:
        derate = 1.0 - omap.actuation_derating_per_hz * (
            f_act - omap.actuation_reference_hz
        )
        v *= max(omap.actuation_derating_floor, derate)
    if cfg.input_voltage != omap.reference_input_voltage:
        v *= cfg.input_voltage / omap.reference_input_voltage
    return v


def system_power(state: PowerState) -> float:
    """Total system power draw in watts for the given operating state."""
    if state.mode == "idle":
        return IDLE_POWER_MW / 1000.0
    if state.mode == "converter_on":
        return CONVERTER_POWER_MW / 1000.0
    increment = (
        TWO_CHANNEL_INCREMENT_MW
        * (state.active_channels / 2.0)
        * (state.f_act / REFERENCE_F_ACT)
    )
    return (CONVERTER_POWER_MW + increment) / 1000.0


def battery_endurance(capacity_mah: float, nominal_voltage: float, state: PowerState) -> float:
    """Runtime in seconds of an ideal constant-voltage battery in this state."""
    if capacity_mah <= 0.0:
        raise ValueError("battery capacity must be positive")
    energy_j = capacity_mah * 1e-3 * 3600.0 * nominal_voltage
    return energy_j / system_power(state)


def bridge_output(
    t: float,
    cfg: ConverterConfig,
    f_sig: float,
    channel: int,
    active_channels: frozenset[int] | set[int] = frozenset({0, 1}),
    output_map: OutputMap | None = None,
) -> float:
    """Signed full-bridge output voltage on one channel at time t.

    A bipolar square wave at the signal frequency whose amplitude is the
    loaded converter output; the mechanical actuation frequency is twice
    the signal frequency.
    """
    if channel not in active_channels:
        raise ValueError(f"channel {channel} is not active")
    f_act = actuation_frequency(
        DriveSignal(waveform="bipolar-square", amplitude=0.0, signal_frequency=f_sig)
    )
    amplitude = output_voltage(cfg, len(active_channels), f_act, output_map)
    if f_sig == 0.0:
        return amplitude
    phase = math.fmod(t * f_sig, 1.0)
    if phase < 0.0:
        phase += 1.0
    return amplitude if phase < 0.5 else -amplitude
