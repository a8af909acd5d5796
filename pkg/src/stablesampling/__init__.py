"""Exact sampling of marked renewal processes on stable regions.

The package draws, without truncation error, the points of a stationary
marked renewal process that fall in a region ``{|v| >= |t|^alpha}`` and uses
this to sample the steady state of GI/GI/infinity queues.
"""
from .distributions import (
    Deterministic,
    DiscreteMark,
    Exponential,
    ExponentialMark,
    Gamma,
    Lognormal,
    PointMassMark,
    ScaledInterArrival,
    ScaledMark,
    ShiftedExponential,
    UniformMark,
)
from .infinite_server import (
    QueueState,
    ScaledSystem,
    ipa_sensitivities,
    sample_stationary_queue,
    steady_state_functionals,
)
from .region import MarkedRenewal, sample_full_region, sample_half_region
from .rng import replication_rng
from .tilted_walk import choose_tilt, find_tilt_root
from .transient import transient_simulate

__version__ = "0.1.0"

__all__ = [
    "Deterministic",
    "DiscreteMark",
    "Exponential",
    "ExponentialMark",
    "Gamma",
    "Lognormal",
    "PointMassMark",
    "ScaledInterArrival",
    "ScaledMark",
    "ShiftedExponential",
    "UniformMark",
    "QueueState",
    "ScaledSystem",
    "ipa_sensitivities",
    "sample_stationary_queue",
    "steady_state_functionals",
    "MarkedRenewal",
    "sample_full_region",
    "sample_half_region",
    "replication_rng",
    "choose_tilt",
    "find_tilt_root",
    "transient_simulate",
]
