"""Diffusion channel with an absorbing spherical receiver.

Closed-form channel model (arrival rate, absorbed fraction, pulse peak time
and amplitude), a reproducible Brownian-dynamics particle simulator for
validating it, comparison experiments, and a CSV-writing CLI backed by an
HTTP service.
"""

from .channel import (
    ABSORBING,
    ChannelGeometry,
    DiffusionEnv,
    EmissionSpec,
    expected_hits,
    hitting_fraction,
    hitting_rate,
    molecule_distribution,
    peak_amplitude,
    peak_time,
    survival_fraction,
)
from .errors import ConfigError, McvdError, OutputError
from .experiments import (
    ComparisonReport,
    SweepSpec,
    run_histogram_experiment,
    run_peak_amplitude_sweep,
    run_peak_time_sweep,
)
from .simulation import (
    AbsorptionMode,
    PeakEstimate,
    SimConfig,
    SimResult,
    estimate_peak,
    simulate,
)
from .special_functions import erf, erfc, erfcx

__version__ = "0.1.0"

__all__ = [
    "ABSORBING",
    "AbsorptionMode",
    "ChannelGeometry",
    "ComparisonReport",
    "ConfigError",
    "DiffusionEnv",
    "EmissionSpec",
    "McvdError",
    "OutputError",
    "PeakEstimate",
    "SimConfig",
    "SimResult",
    "SweepSpec",
    "erf",
    "erfc",
    "erfcx",
    "estimate_peak",
    "expected_hits",
    "hitting_fraction",
    "hitting_rate",
    "molecule_distribution",
    "peak_amplitude",
    "peak_time",
    "run_histogram_experiment",
    "run_peak_amplitude_sweep",
    "run_peak_time_sweep",
    "simulate",
    "survival_fraction",
]
