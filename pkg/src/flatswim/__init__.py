"""Simulator and analysis toolkit for flat fin-undulating surface swimmers.

The package models the full stack of a desk-scale electrohydraulic surface
swimmer: actuator electrostatics, blocked-force metrology on a glass
cantilever, empirical thrust calibration, flyback-converter power budget,
planar maneuvering dynamics with obstacle pushing, light-seeking control,
and surface-flow analysis (wake synthesis, LIC rendering, PIV).
"""

from flatswim.actuator import ActuatorStack, DriveSignal
from flatswim.thrust import ModuleDesign, ThrustCalibration
from flatswim.dynamics import RobotState, DynamicsParams, Obstacle
from flatswim.flow.field import FlowField

__version__ = "0.1.0"

__all__ = [
    "ActuatorStack",
    "DriveSignal",
    "ModuleDesign",
    "ThrustCalibration",
    "RobotState",
    "DynamicsParams",
    "Obstacle",
    "FlowField",
    "__version__",
]
