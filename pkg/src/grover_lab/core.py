"""Domain types and conventions shared by the whole package.

Units: hbar = 1, time is measured in units of the pump-pulse width T and
every angular frequency (laser Rabi couplings, cavity coupling, detuning)
in 1/T.  The marked atoms occupy the first M register slots by convention;
the dynamics is permutation invariant inside the marked and unmarked
groups, so this costs no generality.

Basis orderings (fixed, used everywhere):

* ``effective3``     -- (|g'_m,0>, |g'_u,0>, |e_perp,0>)
* ``collective5``    -- (|g'_m,0>, |g'_u,0>, |e_m,0>, |e_u,0>, |g,1>)
* ``full_register``  -- (|g'_1..N,0>, |e_1..N,0>, |g,1>), marked atoms
  on register indices 1..M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "GroverLabError",
    "InvalidCounts",
    "DegenerateFraction",
    "BackwardInterval",
    "OutOfRange",
    "InsufficientArea",
    "UndefinedAngle",
    "DegenerateDenominator",
    "NormDriftExceeded",
    "DimensionMismatch",
    "NoBracket",
    "DuplicatePoints",
    "NonPositiveInput",
    "ConfigError",
    "NonMonotoneWarning",
    "SearchProblem",
    "validate_problem",
    "GaussianPulse",
    "TailoredGaussianPulse",
    "SampledPulse",
    "PulseShape",
    "PulsePair",
    "StateVector",
    "TimeGrid",
    "TIERS",
    "basis_labels",
    "basis_index",
    "uniform_ground_state",
]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class GroverLabError(Exception):
    """Base class for all package errors."""


class InvalidCounts(GroverLabError):
    """Marked count M outside 1 <= M <= N (or N too small)."""


class DegenerateFraction(GroverLabError):
    """f = M/N = 1 requested where the pulse design divides by sqrt(1-f)."""


class BackwardInterval(GroverLabError):
    """Area requested on an interval with t < t_i."""


class OutOfRange(GroverLabError):
    """Pulse-ratio argument past the exhaustion point eps*A = sqrt((1-f)/f)."""


class InsufficientArea(GroverLabError):
    """Base pulse cannot supply the area required by the adiabatic design."""


class UndefinedAngle(GroverLabError):
    """Mixing angle undefined: pump envelope vanished while Stokes did not."""


class DegenerateDenominator(GroverLabError):
    """|N G^2 - Lambda^2| too small in the partitioning correction."""


class NormDriftExceeded(GroverLabError):
    """Propagation norm drift above the accepted threshold."""


class DimensionMismatch(GroverLabError):
    """State / matrix / projector dimensions are inconsistent."""


class NoBracket(GroverLabError):
    """Fidelity target never crossed while expanding the calibration bracket."""


class DuplicatePoints(GroverLabError):
    """Sweep received repeated f values."""


class NonPositiveInput(GroverLabError):
    """Physical quantity that must be > 0 was not."""


class ConfigError(GroverLabError):
    """Malformed run configuration (unknown keys, bad values, missing file)."""


class NonMonotoneWarning(UserWarning):
    """Fidelity-vs-amplitude crossing was ambiguous; largest crossing taken."""


# ---------------------------------------------------------------------------
# Search problem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchProblem:
    """Register of N atoms, M of them marked, inside a cavity.

    ``cavity_coupling`` (G) and ``detuning`` (delta) are in units of 1/T.
    The solution fraction f = M/N is always derived, never stored.
    """

    n_atoms: int
    n_marked: int
    cavity_coupling: float = 10.0
    detuning: float = 50.0

    def __post_init__(self) -> None:
        if not (isinstance(self.n_atoms, (int, np.integer)) and self.n_atoms >= 1):
            raise InvalidCounts(f"n_atoms must be an integer >= 1, got {self.n_atoms!r}")
        if not (isinstance(self.n_marked, (int, np.integer))
                and 1 <= self.n_marked <= self.n_atoms):
            raise InvalidCounts(
                f"n_marked must satisfy 1 <= M <= N, got M={self.n_marked!r}, N={self.n_atoms}")
        if not self.cavity_coupling > 0:
            raise NonPositiveInput("cavity_coupling must be > 0")
        if not self.detuning > 0:
            raise NonPositiveInput("detuning must be > 0")

    @property
    def fraction(self) -> float:
        """Solution fraction f = M/N in (0, 1]."""
        return self.n_marked / self.n_atoms


def validate_problem(problem: SearchProblem, design: str = "tailored") -> SearchProblem:
    """Check a problem against the requirements of a pulse-design scheme.

    Any design needs at least two register slots.  The locally adiabatic
    design additionally needs M < N because its pulse-ratio solution
    divides by sqrt(1 - f).
    """
    if problem.n_atoms < 2:
        raise InvalidCounts(f"a search needs N >= 2 register slots, got N={problem.n_atoms}")
    if design == "local_adiabatic" and problem.n_marked == problem.n_atoms:
        raise DegenerateFraction(
            "local adiabatic design requires M < N (f < 1): the pulse ratio divides by sqrt(1-f)")
    return problem


# ---------------------------------------------------------------------------
# Pulse shapes
# ---------------------------------------------------------------------------

def _as_float_or_array(t, values):
    if np.isscalar(t):
        return float(values)
    return values


@dataclass(frozen=True)
class GaussianPulse:
    """Gaussian envelope peak * exp(-(t/width)^2)."""

    peak: float
    width: float

    def __post_init__(self) -> None:
        if not self.peak > 0:
            raise NonPositiveInput("Gaussian peak must be > 0")
        if not self.width > 0:
            raise NonPositiveInput("Gaussian width must be > 0")

    def __call__(self, t):
        x = np.asarray(t, dtype=float) / self.width
        return _as_float_or_array(t, self.peak * np.exp(-x * x))

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class TailoredGaussianPulse:
    """Gaussian switch-on, flat top for plateau_factor * width, Gaussian switch-off.

    Continuous at both junctions t = 0 and t = plateau_factor * width,
    where both branches equal ``peak``.
    """

    peak: float
    width: float
    plateau_factor: float

    def __post_init__(self) -> None:
        if not self.peak > 0:
            raise NonPositiveInput("tailored peak must be > 0")
        if not self.width > 0:
            raise NonPositiveInput("tailored width must be > 0")
        if self.plateau_factor < 0:
            raise NonPositiveInput("plateau_factor must be >= 0")

    def __call__(self, t):
        ta = np.asarray(t, dtype=float)
        x = ta / self.width
        rise = np.exp(-x * x)
        fall = np.exp(-(x - self.plateau_factor) ** 2)
        vals = self.peak * np.where(ta < 0.0, rise,
                                    np.where(ta <= self.plateau_factor * self.width, 1.0, fall))
        return _as_float_or_array(t, vals)

    def breakpoints(self) -> tuple[float, ...]:
        return (0.0, self.plateau_factor * self.width)


@dataclass(frozen=True)
class SampledPulse:
    """Envelope given on a uniform time grid; linear interpolation, 0 outside."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.size < 2 or times.shape != values.shape:
            raise GroverLabError("sampled pulse needs matching 1-d time/value arrays (>= 2 points)")
        dt = np.diff(times)
        if not np.all(dt > 0) or not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise GroverLabError("sampled pulse time grid must be uniform and increasing")
        if np.any(values < 0):
            raise GroverLabError("sampled pulse envelope must be nonnegative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        vals = np.interp(np.asarray(t, dtype=float), self.times, self.values,
                         left=0.0, right=0.0)
        return _as_float_or_array(t, vals)

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.times)


PulseShape = Union[GaussianPulse, TailoredGaussianPulse, SampledPulse]

#: callable envelope: either a PulseShape or any vectorised f(t) -> value
Envelope = Callable[[np.ndarray], np.ndarray]


# ---------------------------------------------------------------------------
# Pulse pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PulsePair:
    """The two Rabi envelopes driving the register.

    ``pump`` is Omega(t) (unmarked transition), ``stokes`` is Omega'(t)
    (marked transition).  Both must switch on simultaneously:
    Omega'(t_i) = Omega(t_i).  For the locally adiabatic design the
    Stokes envelope is exhausted at the end of the window,
    Omega'(t_f)/Omega(t_f) = 0.
    """

    pump: Envelope
    stokes: Envelope
    window: tuple[float, float]
    design: str = "explicit"          # local_adiabatic | tailored | explicit
    epsilon: Optional[float] = None   # adiabaticity ratio (local_adiabatic)
    alpha: Optional[float] = None     # plateau factor (tailored)
    fraction: Optional[float] = None  # f the pair was designed for
    info: object = None               # design-specific record, if any

    def __post_init__(self) -> None:
        t_i, t_f = self.window
        if not t_f > t_i:
            raise GroverLabError(f"pulse window must have t_f > t_i, got {self.window}")
        if self.design not in ("local_adiabatic", "tailored", "explicit"):
            raise GroverLabError(f"unknown pulse design {self.design!r}")
        p_i = float(self.pump(t_i))
        s_i = float(self.stokes(t_i))
        if p_i <= 0.0 or abs(s_i - p_i) > 1e-12 * abs(p_i):
            raise GroverLabError(
                f"pulses must switch on simultaneously: Omega(t_i)={p_i!r}, Omega'(t_i)={s_i!r}")
        if self.design == "local_adiabatic":
            p_f = float(self.pump(t_f))
            s_f = float(self.stokes(t_f))
            if p_f <= 0.0 or abs(s_f / p_f) > 1e-12:
                raise GroverLabError(
                    f"designed pair must end with Omega'/Omega = 0, got {s_f / p_f!r}")

    @property
    def t_start(self) -> float:
        return self.window[0]

    @property
    def t_end(self) -> float:
        return self.window[1]

    def pump_values(self, t) -> np.ndarray:
        return np.asarray(self.pump(t), dtype=float)

    def stokes_values(self, t) -> np.ndarray:
        return np.asarray(self.stokes(t), dtype=float)

    def terminal_ratio(self) -> float:
        """Omega'(t_f)/Omega(t_f); identically 0 for the locally adiabatic design."""
        return float(self.stokes(self.t_end)) / float(self.pump(self.t_end))


# ---------------------------------------------------------------------------
# State vectors and basis labels
# ---------------------------------------------------------------------------

TIERS = ("effective3", "collective5", "full_register")

_EFFECTIVE3_LABELS = ("g'_m,0", "g'_u,0", "e_perp,0")
_COLLECTIVE5_LABELS = ("g'_m,0", "g'_u,0", "e_m,0", "e_u,0", "g,1")


def tier_dimension(tier: str, n_atoms: Optional[int] = None) -> int:
    if tier == "effective3":
        return 3
    if tier == "collective5":
        return 5
    if tier == "full_register":
        if n_atoms is None:
            raise DimensionMismatch("full_register dimension needs n_atoms")
        return 2 * n_atoms + 1
    raise DimensionMismatch(f"unknown tier {tier!r}")


def basis_labels(tier: str, n_atoms: Optional[int] = None) -> tuple[str, ...]:
    """Ordered basis labels for a tier (see module docstring for conventions)."""
    if tier == "effective3":
        return _EFFECTIVE3_LABELS
    if tier == "collective5":
        return _COLLECTIVE5_LABELS
    if tier == "full_register":
        if n_atoms is None:
            raise DimensionMismatch("full_register labels need n_atoms")
        ground = tuple(f"g'_{j},0" for j in range(1, n_atoms + 1))
        excited = tuple(f"e_{j},0" for j in range(1, n_atoms + 1))
        return ground + excited + ("g,1",)
    raise DimensionMismatch(f"unknown tier {tier!r}")


def basis_index(tier: str, label: str, n_atoms: Optional[int] = None) -> int:
    """Inverse of :func:`basis_labels`; raises DimensionMismatch for bad labels."""
    labels = basis_labels(tier, n_atoms)
    try:
        return labels.index(label)
    except ValueError:
        raise DimensionMismatch(f"label {label!r} not in tier {tier!r}") from None


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitudes in one of the fixed basis orderings."""

    tier: str
    amplitudes: np.ndarray
    n_atoms: Optional[int] = None
    n_marked: Optional[int] = None

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex)
        expected = tier_dimension(self.tier, self.n_atoms)
        if amps.ndim != 1 or amps.size != expected:
            raise DimensionMismatch(
                f"tier {self.tier!r} needs {expected} amplitudes, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-10:
            raise GroverLabError(f"state vector must have unit norm, got {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def labels(self) -> tuple[str, ...]:
        return basis_labels(self.tier, self.n_atoms)


def uniform_ground_state(tier: str, problem: Optional[SearchProblem] = None,
                         fraction: Optional[float] = None) -> StateVector:
    """The entangled start state |g',0>: uniform over all N ground slots.

    In the collective bases it reads sqrt(f)|g'_m,0> + sqrt(1-f)|g'_u,0>.
    """
    if fraction is None:
        if problem is None:
            raise GroverLabError("need a problem or a fraction for the initial state")
        fraction = problem.fraction
    if not 0.0 < fraction <= 1.0:
        raise InvalidCounts(f"fraction must be in (0, 1], got {fraction}")
    if tier == "effective3":
        amps = np.array([math.sqrt(fraction), math.sqrt(1.0 - fraction), 0.0])
        return StateVector(tier, amps)
    if tier == "collective5":
        amps = np.zeros(5)
        amps[0] = math.sqrt(fraction)
        amps[1] = math.sqrt(1.0 - fraction)
        return StateVector(tier, amps)
    if tier == "full_register":
        if problem is None:
            raise GroverLabError("full_register initial state needs the problem")
        n = problem.n_atoms
        amps = np.zeros(2 * n + 1)
        amps[:n] = 1.0 / math.sqrt(n)
        return StateVector(tier, amps, n_atoms=n, n_marked=problem.n_marked)
    raise DimensionMismatch(f"unknown tier {tier!r}")


# ---------------------------------------------------------------------------
# Time grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid on [t_start, t_end] with n_steps steps."""

    t_start: float
    t_end: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise GroverLabError(f"time grid needs t_end > t_start, got {self.t_start}..{self.t_end}")
        if not (isinstance(self.n_steps, (int, np.integer)) and self.n_steps >= 1):
            raise GroverLabError(f"n_steps must be an integer >= 1, got {self.n_steps!r}")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.n_steps

    def times(self) -> np.ndarray:
        """The n_steps + 1 node times."""
        return np.linspace(self.t_start, self.t_end, self.n_steps + 1)

    def midpoints(self) -> np.ndarray:
        """The n_steps step midpoints used by the exponential-midpoint rule."""
        t = self.times()
        return 0.5 * (t[:-1] + t[1:])
