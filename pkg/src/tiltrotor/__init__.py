"""Quad tilt-rotor flight-dynamics toolkit.

Sizing, blade-element rotor aerodynamics, airframe forces and moments,
6-DOF mode-transition simulation, finite-time convergent observers, and a
switched transition controller, wired together by a CLI harness.
"""

from .params import AircraftParams, RotorParams, TailParams, WingParams
from .sizing import DesignTargets, SizingResult, load_params, size_aircraft

__all__ = [
    "AircraftParams",
    "RotorParams",
    "TailParams",
    "WingParams",
    "DesignTargets",
    "SizingResult",
    "load_params",
    "size_aircraft",
]

__version__ = "0.1.0"
