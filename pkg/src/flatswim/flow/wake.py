"""Parametric thrust-wake synthesis and wake diagnostics.

The forward-swimming wake is modeled as two mirror-image Lamb-Oseen
vortices behind the body feeding a rearward centerline jet; turning scales
one vortex down. Metrics extract the rearward jet speed in the robot frame
and the lateral half-peak width of the wake.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from flatswim.flow.field import FlowField


@dataclass(frozen=True)
class WakeParams:
    """Geometry and strength of the synthetic wake (robot at origin, heading +x)."""

    nx: int = 161
    ny: int = 121
    spacing: float = 2e-3
    vortex_behind: float = 0.05
    vortex_lateral: float = 0.02
    circulation: float = 2.0e-4
    core_radius: float = 0.012
    jet_peak: float = 0.03
    jet_sigma: float = 0.012
    jet_behind: float = 0.05
    jet_axial_sigma: float = 0.04
    asymmetry: float = 1.0
    # Strengths above apply at this robot speed and scale linearly with it.
    reference_speed: float = 0.01

    def __post_init__(self) -> None:
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid must be at least 2x2")
        if self.spacing <= 0.0 or self.core_radius <= 0.0:
            raise ValueError("spacing and core radius must be positive")
        if self.jet_sigma <= 0.0 or self.jet_axial_sigma <= 0.0:
            raise ValueError("jet widths must be positive")
        if self.asymmetry < 0.0:
            raise ValueError("asymmetry factor must be non-negative")


def lamb_oseen_velocity(
    x: np.ndarray,
    y: np.ndarray,
    center: tuple[float, float],
    circulation: float,
    core_radius: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Velocity of a single Lamb-Oseen vortex; positive circulation is CCW.

    u_theta(r) = Gamma / (2 pi r) * (1 - exp(-r^2 / r_c^2)).
    """
    dx = x - center[0]
    dy = y - center[1]
    r2 = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = circulation / (2.0 * np.pi * r2) * (1.0 - np.exp(-r2 / core_radius**2))
    factor = np.where(r2 > 0.0, factor, 0.0)
    return -factor * dy, factor * dx


def lamb_oseen_circulation(radius: float, circulation: float, core_radius: float) -> float:
    """Closed-form circulation enclosed by a circle of the given radius."""
    return circulation * (1.0 - np.exp(-(radius**2) / core_radius**2))


def synthesize_wake(
    robot_speed: float, mode: str = "forward", params: WakeParams = WakeParams()
) -> FlowField:
    """Surface velocity field behind a swimming robot.

    Forward mode is exactly mirror-symmetric about the centerline; turning
    mode scales the upper (y > 0) vortex by the asymmetry factor. The grid
    is centered laterally on the robot with most of its extent behind.
    """
    if mode not in ("forward", "turning"):
        raise ValueError(f"unknown wake mode {mode!r}")
    # Lateral coordinates built symmetric about zero so mirror points are
    # exact IEEE negations of each other.
    ys = (np.arange(params.ny) - (params.ny - 1) / 2.0) * params.spacing
    xs = (np.arange(params.nx) - (params.nx - 1) * 0.75) * params.spacing
    origin = (float(xs[0]), float(ys[0]))
    x, y = np.meshgrid(xs, ys)

    scale = robot_speed / params.reference_speed
    upper_scale = params.asymmetry if mode == "turning" else 1.0
    # Upper vortex clockwise, lower counter-clockwise: both drive a
    # rearward (-x) jet along the centerline between them.
    u1, v1 = lamb_oseen_velocity(
        x, y,
        (-params.vortex_behind, params.vortex_lateral),
        -params.circulation * scale * upper_scale,
        params.core_radius,
    )
    u2, v2 = lamb_oseen_velocity(
        x, y,
        (-params.vortex_behind, -params.vortex_lateral),
        params.circulation * scale,
        params.core_radius,
    )
    jet = (
        -params.jet_peak
        * scale
        * np.exp(-(y**2) / (2.0 * params.jet_sigma**2))
        * np.exp(-((x + params.jet_behind) ** 2) / (2.0 * params.jet_axial_sigma**2))
    )
    return FlowField(u=u1 + u2 + jet, v=v1 + v2, spacing=params.spacing, origin=origin)


@dataclass(frozen=True)
class WakeMetrics:
    u_prop: float
    wake_width: float
    valid: bool


def wake_metrics(
    fld: FlowField,
    robot_speed: float,
    half_peak_fraction: float = 0.5,
) -> WakeMetrics:
    """Rearward jet speed in the robot frame and lateral wake width.

    u_prop is the peak rearward (-x) velocity along the jet centerline
    minus the robot speed (frame correction); the centerline is located at
    the field's own rearward maximum, so the metrics are invariant under
    grid translation. The width is the lateral extent around the peak where
    the rearward component stays above the half-peak fraction, with linear
    interpolation of the crossings. A field with no rearward flow is
    flagged invalid and reports zero metrics (frame-corrected).
    """
    rear = -fld.u  # rearward-positive
    ys = fld.ys
    j_peak_g, peak_i = np.unravel_index(int(np.argmax(rear)), rear.shape)
    peak = float(rear[j_peak_g, peak_i])
    if peak <= 0.0:
        return WakeMetrics(u_prop=0.0 - robot_speed, wake_width=0.0, valid=False)

    profile = rear[:, peak_i]
    threshold = half_peak_fraction * peak
    j_peak = int(np.argmax(profile))
    lo = j_peak
    while lo > 0 and profile[lo - 1] >= threshold:
        lo -= 1
    hi = j_peak
    while hi < len(profile) - 1 and profile[hi + 1] >= threshold:
        hi += 1
    width = float(ys[hi] - ys[lo])
    # Refine both ends by interpolating the threshold crossing.
    if lo > 0 and profile[lo - 1] < threshold:
        frac = (profile[lo] - threshold) / (profile[lo] - profile[lo - 1])
        width += frac * fld.spacing
    if hi < len(profile) - 1 and profile[hi + 1] < threshold:
        frac = (profile[hi] - threshold) / (profile[hi] - profile[hi + 1])
        width += frac * fld.spacing
    return WakeMetrics(u_prop=peak - robot_speed, wake_width=width, valid=True)
