"""Offline signal temporal logic monitoring of vehicle trajectories.

Subpackages: :mod:`.stl` (formulas and monitors), :mod:`.sim` (IDM
micro-simulator with V2V beaconing). Top-level modules cover signals,
traffic specifications, file formats and scikit-learn style wrappers.
"""

from .estimators import ExponentialSmoother, MotionChannels, STLMonitor, TrafficSpecMonitor
from .signals import Sample, Signal, Trace, derivative, derive_motion_channels, exp_smooth, value_at
from .specs import (
    BrakingSpecParams,
    ConformanceReport,
    HeadwaySpecParams,
    OfframpSpecParams,
    SpeedSpecParams,
    build_braking_spec,
    build_headway_spec,
    build_offramp_spec,
    build_speed_spec,
    evaluate_population,
)
from .stl import Verdict, monitor, parse, robustness

__version__ = "0.1.0"

__all__ = [
    "BrakingSpecParams",
    "ConformanceReport",
    "ExponentialSmoother",
    "HeadwaySpecParams",
    "MotionChannels",
    "OfframpSpecParams",
    "STLMonitor",
    "Sample",
    "Signal",
    "SpeedSpecParams",
    "Trace",
    "TrafficSpecMonitor",
    "Verdict",
    "build_braking_spec",
    "build_headway_spec",
    "build_offramp_spec",
    "build_speed_spec",
    "derivative",
    "derive_motion_channels",
    "evaluate_population",
    "exp_smooth",
    "monitor",
    "parse",
    "robustness",
    "value_at",
]
