"""Adiabatic dark-state search in a cavity-coupled atomic register.

Subpackages: :mod:`core` (domain types), :mod:`pulses` (envelopes and the
adiabatic pulse designs), :mod:`hamiltonians` (model tiers and the
instantaneous frame), :mod:`propagator` (time integration and oracles),
:mod:`analytics` (closed-form passage populations), :mod:`experiments`
(calibration, scaling and consistency studies) and :mod:`cli`.
"""

from .core import (
    GaussianPulse,
    GroverLabError,
    PulsePair,
    SampledPulse,
    SearchProblem,
    StateVector,
    TailoredGaussianPulse,
    TimeGrid,
    uniform_ground_state,
    validate_problem,
)
from .pulses import (
    area_duration_relation,
    design_local_adiabatic_pair,
    design_tailored_pair,
    eval_pulse,
    local_adiabatic_ratio,
    pulse_area,
)

__version__ = "0.1.0"
