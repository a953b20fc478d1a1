"""Surface-flow toolkit: wake synthesis, LIC rendering, and PIV."""

from flatswim.flow.field import FlowField
from flatswim.flow.wake import WakeParams, WakeMetrics, synthesize_wake, wake_metrics
from flatswim.flow.lic import lic_render, pink_noise
from flatswim.flow.piv import PivParams, PivResult, piv_correlate, synth_particles

__all__ = [
    "FlowField",
    "WakeParams",
    "WakeMetrics",
    "synthesize_wake",
    "wake_metrics",
    "lic_render",
    "pink_noise",
    "PivParams",
    "PivResult",
    "piv_correlate",
    "synth_particles",
]
